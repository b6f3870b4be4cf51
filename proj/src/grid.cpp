#include "kmslab/grid.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <tuple>

#include "kmslab/errors.hpp"

namespace kmslab {

namespace {

// fftw_plan creation is not thread-safe; execution with new arrays is.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(int dimension, int points, int sign) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto key = std::make_tuple(dimension, points, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    int dims[3] = {points, points, points};
    std::size_t total = 1;
    for (int i = 0; i < dimension; ++i) total *= static_cast<std::size_t>(points);
    std::vector<cplx> scratch(total);
    auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = fftw_plan_dft(dimension, dims, p, p, sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!plan) throw std::runtime_error("FFTW plan creation failed");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  PlanCache() = default;
  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

int wrap(int k, int m) {
  int r = k % m;
  return r < 0 ? r + m : r;
}

}  // namespace

GridTransform::GridTransform(int dimension, int points) : dimension_(dimension), points_(points), total_(1) {
  if (dimension < 1 || dimension > 3) throw std::invalid_argument("unsupported grid dimension");
  if (points < 1) throw std::invalid_argument("grid needs at least one point per axis");
  for (int i = 0; i < dimension; ++i) total_ *= static_cast<std::size_t>(points);
}

std::size_t GridTransform::slot(const Mode& k) const {
  std::size_t s = 0;
  for (int i = 0; i < dimension_; ++i) s = s * points_ + wrap(k[i], points_);
  return s;
}

Mode GridTransform::frequency(std::size_t slot) const {
  Mode k{0, 0, 0};
  for (int i = dimension_ - 1; i >= 0; --i) {
    int j = static_cast<int>(slot % points_);
    slot /= points_;
    k[i] = j < (points_ + 1) / 2 ? j : j - points_;
  }
  return k;
}

void GridTransform::execute(std::vector<cplx>& buf, int sign) const {
  fftw_plan plan = PlanCache::instance().get(dimension_, points_, sign);
  auto* p = reinterpret_cast<fftw_complex*>(buf.data());
  fftw_execute_dft(plan, p, p);
}

std::vector<cplx> GridTransform::eval(const SpectralField& u) const {
  if (u.lattice().dimension() != dimension_) throw LatticeMismatch("grid and field dimensions differ");
  std::vector<cplx> buf(total_, cplx(0.0));
  for (std::size_t i = 0; i < u.size(); ++i) buf[slot(u.lattice().mode(i))] += u[i];
  execute(buf, FFTW_BACKWARD);
  return buf;
}

std::vector<cplx> GridTransform::forward(std::span<const cplx> values) const {
  if (values.size() != total_) throw std::invalid_argument("grid value count mismatch");
  std::vector<cplx> buf(values.begin(), values.end());
  execute(buf, FFTW_FORWARD);
  const double scale = 1.0 / static_cast<double>(total_);
  for (auto& c : buf) c *= scale;
  return buf;
}

std::vector<cplx> GridTransform::backward(std::span<const cplx> coeffs) const {
  if (coeffs.size() != total_) throw std::invalid_argument("grid coefficient count mismatch");
  std::vector<cplx> buf(coeffs.begin(), coeffs.end());
  execute(buf, FFTW_BACKWARD);
  return buf;
}

SpectralField GridTransform::synth(std::span<const cplx> values, const LatticePtr& lattice) const {
  if (lattice->dimension() != dimension_) throw LatticeMismatch("grid and lattice dimensions differ");
  auto coeffs = forward(values);
  SpectralField out(lattice);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = coeffs[slot(lattice->mode(i))];
  return out;
}

int alias_free_points(int cutoff, int degree) {
  const int need = std::max(degree * cutoff + 1, 2 * cutoff + 1);
  for (int m = std::max(need, 1);; ++m) {
    int r = m;
    for (int f : {2, 3, 5})
      while (r % f == 0) r /= f;
    if (r == 1) return m;
  }
}

namespace {
void check_points(const ModeLattice& lattice, int points) {
  if (points <= 2 * lattice.cutoff()) {
    throw AliasingError("grid of " + std::to_string(points) + " points per axis is too small for cutoff " +
                        std::to_string(lattice.cutoff()));
  }
}
}  // namespace

std::vector<cplx> grid_eval(const SpectralField& u, int points) {
  check_points(u.lattice(), points);
  return GridTransform(u.lattice().dimension(), points).eval(u);
}

SpectralField grid_synth(std::span<const cplx> values, const LatticePtr& lattice, int points) {
  check_points(*lattice, points);
  return GridTransform(lattice->dimension(), points).synth(values, lattice);
}

}  // namespace kmslab
