#include "kmslab/field.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "kmslab/errors.hpp"

namespace kmslab {

SpectralField::SpectralField(LatticePtr lattice)
    : lattice_(std::move(lattice)), coeffs_(lattice_ ? lattice_->size() : 0) {
  if (!lattice_) throw std::invalid_argument("SpectralField requires a lattice");
}

SpectralField::SpectralField(LatticePtr lattice, std::vector<cplx> coeffs)
    : lattice_(std::move(lattice)), coeffs_(std::move(coeffs)) {
  if (!lattice_) throw std::invalid_argument("SpectralField requires a lattice");
  if (coeffs_.size() != lattice_->size()) {
    throw std::invalid_argument("coefficient count " + std::to_string(coeffs_.size()) +
                                " does not match lattice size " + std::to_string(lattice_->size()));
  }
}

SpectralField SpectralField::basis(LatticePtr lattice, std::size_t index, cplx amplitude) {
  SpectralField f(std::move(lattice));
  if (index >= f.size()) throw std::out_of_range("basis index outside lattice");
  f.coeffs_[index] = amplitude;
  return f;
}

SpectralField SpectralField::basis(LatticePtr lattice, const Mode& k, cplx amplitude) {
  auto idx = lattice->index_of(k);
  if (!idx) throw std::out_of_range("mode outside lattice");
  return basis(std::move(lattice), *idx, amplitude);
}

void require_same_lattice(const SpectralField& a, const SpectralField& b) {
  if (!a.lattice_ptr() || !b.lattice_ptr() || !(a.lattice() == b.lattice())) {
    throw LatticeMismatch("fields live on different lattices");
  }
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require_same_lattice(*this, other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require_same_lattice(*this, other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(cplx s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

SpectralField& SpectralField::axpy(cplx a, const SpectralField& x) {
  require_same_lattice(*this, x);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += a * x.coeffs_[i];
  return *this;
}

bool SpectralField::is_finite() const {
  for (const auto& c : coeffs_)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  return true;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(cplx s, SpectralField a) { return a *= s; }
SpectralField operator-(SpectralField a) { return a *= -1.0; }

double pair_real(const SpectralField& u, const SpectralField& phi) {
  return pair_complex(u, phi).real();
}

cplx pair_complex(const SpectralField& u, const SpectralField& phi) {
  require_same_lattice(u, phi);
  cplx s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += std::conj(u[i]) * phi[i];
  return s;
}

double sobolev_norm(const SpectralField& u, double s) {
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) acc += std::pow(u.lattice().eigenvalue(i), s) * std::norm(u[i]);
  return std::sqrt(acc);
}

double mass(const SpectralField& u) {
  double acc = 0.0;
  for (const auto& c : u.coeffs()) acc += std::norm(c);
  return acc;
}

double max_abs(const SpectralField& u) {
  double m = 0.0;
  for (const auto& c : u.coeffs()) m = std::max(m, std::abs(c));
  return m;
}

SpectralField apply_J(const SpectralField& u) {
  SpectralField out = u;
  for (auto& c : out.coeffs()) c = cplx(c.imag(), -c.real());
  return out;
}

SpectralField apply_A_power(const SpectralField& u, double p) {
  SpectralField out = u;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= std::pow(u.lattice().eigenvalue(i), p);
  return out;
}

bool is_real_field(const SpectralField& u, double tol) {
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (std::abs(u[u.lattice().negated(i)] - std::conj(u[i])) > tol) return false;
  }
  return true;
}

SpectralField real_part(const SpectralField& u) {
  SpectralField out = u;
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = 0.5 * (u[i] + std::conj(u[u.lattice().negated(i)]));
  return out;
}

FieldPair make_pair(SpectralField u, SpectralField v) {
  require_same_lattice(u, v);
  return FieldPair{std::move(u), std::move(v)};
}

FieldPair& FieldPair::operator+=(const FieldPair& o) {
  u += o.u;
  v += o.v;
  return *this;
}
FieldPair& FieldPair::operator-=(const FieldPair& o) {
  u -= o.u;
  v -= o.v;
  return *this;
}
FieldPair& FieldPair::operator*=(cplx s) {
  u *= s;
  v *= s;
  return *this;
}
FieldPair& FieldPair::axpy(cplx a, const FieldPair& x) {
  u.axpy(a, x.u);
  v.axpy(a, x.v);
  return *this;
}

FieldPair operator+(FieldPair a, const FieldPair& b) { return a += b; }
FieldPair operator-(FieldPair a, const FieldPair& b) { return a -= b; }
FieldPair operator*(cplx s, FieldPair a) { return a *= s; }

void require_same_lattice(const FieldPair& a, const FieldPair& b) {
  require_same_lattice(a.u, b.u);
  require_same_lattice(a.v, b.v);
  require_same_lattice(a.u, a.v);
}

double pair_real(const FieldPair& a, const FieldPair& b) { return pair_real(a.u, b.u) + pair_real(a.v, b.v); }

double sobolev_norm(const FieldPair& a, double s) {
  // Weighted by the block operator A = diag(-Laplacian + 1, 1).
  const double nu = sobolev_norm(a.u, s), nv = sobolev_norm(a.v, 0.0);
  return std::sqrt(nu * nu + nv * nv);
}

double mass(const FieldPair& a) { return mass(a.u) + mass(a.v); }
double max_abs(const FieldPair& a) { return std::max(max_abs(a.u), max_abs(a.v)); }

FieldPair apply_J(const FieldPair& a) { return FieldPair{a.v, -a.u}; }
FieldPair apply_A(const FieldPair& a) { return FieldPair{apply_A(a.u), a.v}; }
FieldPair apply_A_power(const FieldPair& a, double p) { return FieldPair{apply_A_power(a.u, p), a.v}; }
FieldPair real_part(const FieldPair& a) { return FieldPair{real_part(a.u), real_part(a.v)}; }
bool is_real_field(const FieldPair& a, double tol) { return is_real_field(a.u, tol) && is_real_field(a.v, tol); }

}  // namespace kmslab
