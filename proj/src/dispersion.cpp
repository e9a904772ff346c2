#include "qpwave/dispersion.hpp"

#include "qpwave/errors.hpp"

namespace qpwave {

DispersionSymbol DispersionSymbol::custom(std::vector<QScalar> coefficients) {
  if (coefficients.size() > 5) throw ValidationError("custom dispersion polynomial degree must be <= 4");
  return DispersionSymbol(Kind::custom, std::move(coefficients));
}

DispersionSymbol DispersionSymbol::parse(const std::string& name) {
  if (name == "schrodinger") return schrodinger();
  if (name == "airy") return airy();
  if (name == "none") return none();
  throw ValidationError("unknown dispersion symbol '" + name + "' (schrodinger, airy, none)");
}

std::string DispersionSymbol::name() const {
  switch (kind_) {
    case Kind::schrodinger:
      return "schrodinger";
    case Kind::airy:
      return "airy";
    case Kind::custom:
      return coeffs_.empty() ? "none" : "custom";
  }
  return "custom";
}

QScalar DispersionSymbol::rate(std::span<const QScalar> xi) const {
  switch (kind_) {
    case Kind::schrodinger: {
      QScalar s;
      for (const auto& x : xi) s += x * x;
      return s;
    }
    case Kind::airy: {
      if (xi.size() != 1) throw DimensionError("Airy dispersion needs d = 1");
      return -(xi[0] * xi[0] * xi[0]);
    }
    case Kind::custom: {
      if (coeffs_.empty()) return QScalar();
      if (xi.size() != 1) throw DimensionError("custom dispersion needs d = 1");
      QScalar acc;
      for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * xi[0] + *it;
      return acc;
    }
  }
  return QScalar();
}

double DispersionSymbol::rate_value(std::span<const double> xi) const {
  switch (kind_) {
    case Kind::schrodinger: {
      double s = 0;
      for (double x : xi) s += x * x;
      return s;
    }
    case Kind::airy:
      if (xi.size() != 1) throw DimensionError("Airy dispersion needs d = 1");
      return -xi[0] * xi[0] * xi[0];
    case Kind::custom: {
      if (coeffs_.empty()) return 0.0;
      if (xi.size() != 1) throw DimensionError("custom dispersion needs d = 1");
      double acc = 0;
      for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * xi[0] + it->value();
      return acc;
    }
  }
  return 0.0;
}

}  // namespace qpwave
