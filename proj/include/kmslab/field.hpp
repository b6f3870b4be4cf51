#pragma once

#include <complex>
#include <span>
#include <vector>

#include "kmslab/lattice.hpp"

namespace kmslab {

using cplx = std::complex<double>;

// u_n = sum_k c_k e^{ik.x} on the unit-volume torus (modes orthonormal).
class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(LatticePtr lattice);
  SpectralField(LatticePtr lattice, std::vector<cplx> coeffs);

  static SpectralField basis(LatticePtr lattice, std::size_t index, cplx amplitude = 1.0);
  static SpectralField basis(LatticePtr lattice, const Mode& k, cplx amplitude = 1.0);

  const ModeLattice& lattice() const { return *lattice_; }
  const LatticePtr& lattice_ptr() const { return lattice_; }
  std::size_t size() const { return coeffs_.size(); }

  std::span<const cplx> coeffs() const { return coeffs_; }
  std::span<cplx> coeffs() { return coeffs_; }
  const cplx& operator[](std::size_t i) const { return coeffs_[i]; }
  cplx& operator[](std::size_t i) { return coeffs_[i]; }

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(cplx s);
  SpectralField& axpy(cplx a, const SpectralField& x);  // this += a x

  bool is_finite() const;

 private:
  LatticePtr lattice_;
  std::vector<cplx> coeffs_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(cplx s, SpectralField a);
SpectralField operator-(SpectralField a);

// Throws LatticeMismatch unless both fields live on the same (d, n).
void require_same_lattice(const SpectralField& a, const SpectralField& b);

// Re sum conj(c_k(u)) c_k(phi).
double pair_real(const SpectralField& u, const SpectralField& phi);
// sum conj(c_k(u)) c_k(phi), antilinear on the left.
cplx pair_complex(const SpectralField& u, const SpectralField& phi);
// (sum lambda_k^s |c_k|^2)^{1/2}
double sobolev_norm(const SpectralField& u, double s);
// sum |c_k|^2
double mass(const SpectralField& u);
double max_abs(const SpectralField& u);

// Multiplication by -i.
SpectralField apply_J(const SpectralField& u);
// c_k -> lambda_k^p c_k
SpectralField apply_A_power(const SpectralField& u, double p);
inline SpectralField apply_A(const SpectralField& u) { return apply_A_power(u, 1.0); }

// Fields of real functions satisfy c_{-k} = conj(c_k).
bool is_real_field(const SpectralField& u, double tol = 0.0);
// Orthogonal projection onto real fields: (c_k + conj(c_{-k}))/2.
SpectralField real_part(const SpectralField& u);

// Wave phase-space point (u, v).
struct FieldPair {
  SpectralField u;
  SpectralField v;

  const ModeLattice& lattice() const { return u.lattice(); }
  const LatticePtr& lattice_ptr() const { return u.lattice_ptr(); }

  FieldPair& operator+=(const FieldPair& o);
  FieldPair& operator-=(const FieldPair& o);
  FieldPair& operator*=(cplx s);
  FieldPair& axpy(cplx a, const FieldPair& x);
  bool is_finite() const { return u.is_finite() && v.is_finite(); }
};

FieldPair make_pair(SpectralField u, SpectralField v);
FieldPair operator+(FieldPair a, const FieldPair& b);
FieldPair operator-(FieldPair a, const FieldPair& b);
FieldPair operator*(cplx s, FieldPair a);

void require_same_lattice(const FieldPair& a, const FieldPair& b);
double pair_real(const FieldPair& a, const FieldPair& b);
double sobolev_norm(const FieldPair& a, double s);
double mass(const FieldPair& a);
double max_abs(const FieldPair& a);
// (u, v) -> (v, -u)
FieldPair apply_J(const FieldPair& a);
// A acts as -Laplacian + 1 on u and the identity on v.
FieldPair apply_A(const FieldPair& a);
FieldPair apply_A_power(const FieldPair& a, double p);
FieldPair real_part(const FieldPair& a);
bool is_real_field(const FieldPair& a, double tol = 0.0);

}  // namespace kmslab
