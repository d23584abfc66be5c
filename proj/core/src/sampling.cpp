#include "densagg/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace densagg {
namespace {

// 53 random mantissa bits -> uniform on [0, 1). Avoids the
// implementation-defined std::uniform_real_distribution.
double unit_interval(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

DensitySampler::DensitySampler(const PiecewiseDensity& density)
    : breakpoints_(density.breakpoints().begin(), density.breakpoints().end()) {
  cumulative_.reserve(density.cell_count());
  double running = 0.0;
  for (std::size_t i = 0; i < density.cell_count(); ++i) {
    double mass = density.cell_width(i) * density.values()[i];
    running += mass;
    cumulative_.push_back(running);
    if (mass > 0.0) last_positive_ = i;
  }
}

std::vector<double> DensitySampler::draw(std::size_t n, std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::vector<double> out;
  out.reserve(n);
  const double total = cumulative_.back();
  for (std::size_t k = 0; k < n; ++k) {
    double u = unit_interval(rng) * total;
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    auto cell = std::min(static_cast<std::size_t>(it - cumulative_.begin()), last_positive_);
    double lo = breakpoints_[cell];
    double hi = breakpoints_[cell + 1];
    double x = lo + unit_interval(rng) * (hi - lo);
    if (x >= hi) x = std::nextafter(hi, lo);
    out.push_back(x);
  }
  return out;
}

std::vector<double> sample(const PiecewiseDensity& f, std::size_t n, std::uint64_t seed) {
  return DensitySampler(f).draw(n, seed);
}

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = splitmix64(base);
  for (std::uint64_t p : path) h = splitmix64(h ^ splitmix64(p + 0x632be59bd9b4e019ULL));
  return h;
}

}  // namespace densagg
