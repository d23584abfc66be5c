#include "densagg/lowerbound.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "densagg/errors.hpp"

namespace densagg {

namespace {

bool code_length_suffices(std::size_t d, std::size_t m) {
  return std::pow(2.0L, static_cast<long double>(d) / 8.0L) >= static_cast<long double>(m);
}

// Uniform grid k / (2D), k = 0..2D. Every function of the family uses this
// exact expression so that grids coincide bit for bit.
std::vector<double> half_cell_grid(std::size_t d) {
  std::vector<double> grid(2 * d + 1);
  for (std::size_t k = 0; k <= 2 * d; ++k) {
    grid[k] = static_cast<double>(k) / static_cast<double>(2 * d);
  }
  return grid;
}

void require_length(const PerturbationFamily& family, const BinaryWord& w) {
  if (w.size() != family.code_length()) {
    throw ValidationError("word of length " + std::to_string(w.size()) +
                          " does not index a family with D = " +
                          std::to_string(family.code_length()));
  }
}

}  // namespace

std::size_t min_code_length(std::size_t target_size) {
  if (target_size <= 1) return 0;
  auto d = static_cast<std::size_t>(std::ceil(8.0 * std::log2(static_cast<double>(target_size))));
  while (!code_length_suffices(d, target_size)) ++d;
  while (d > 0 && code_length_suffices(d - 1, target_size)) --d;
  return d;
}

PerturbationFamily::PerturbationFamily(std::size_t code_length, double amplitude,
                                       BoundParameter bound, std::size_t sample_size,
                                       std::size_t target_size)
    : d_(code_length), l_(amplitude), bound_(bound), n_(sample_size), m_(target_size) {
  if (d_ == 0) throw ParameterError("perturbation family needs D >= 1");
  if (d_ != min_code_length(m_)) {
    throw ParameterError("D = " + std::to_string(d_) + " is not the smallest integer with 2^(D/8) >= M = " +
                         std::to_string(m_));
  }
  if (!(l_ > 0.0) || !std::isfinite(l_)) throw ParameterError("amplitude L must be positive");
  if (l_ > static_cast<double>(d_) * bound_.slack()) {
    throw ParameterError("amplitude L = " + std::to_string(l_) + " violates L <= D min(1, A-1) = " +
                         std::to_string(static_cast<double>(d_) * bound_.slack()));
  }
}

PerturbationFamily choose_parameters(std::size_t target_size, std::size_t sample_size,
                                     BoundParameter bound) {
  if (target_size < 2) throw ParameterError("family size M must be at least 2");
  if (sample_size == 0) throw ParameterError("sample size n must be at least 1");
  const double log_m = std::log(static_cast<double>(target_size));
  const double slack = bound.slack();
  const double gate = 16.0 * slack * slack * static_cast<double>(sample_size);
  if (log_m > gate) {
    throw ParameterError("precondition log M <= 16 min(1, A-1)^2 n fails: log M = " +
                         std::to_string(log_m) + " > " + std::to_string(gate));
  }
  const std::size_t d = min_code_length(target_size);
  const double amplitude =
      static_cast<double>(d) / 4.0 * std::sqrt(log_m / static_cast<double>(sample_size));
  return PerturbationFamily(d, amplitude, bound, sample_size, target_size);
}

BinaryWord::BinaryWord(std::size_t length) : length_(length), blocks_((length + 63) / 64, 0) {}

BinaryWord BinaryWord::from_string(std::string_view bits) {
  BinaryWord w(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != '0' && bits[i] != '1') {
      throw ValidationError("binary word contains a character other than 0 or 1");
    }
    w.set(i, bits[i] == '1');
  }
  return w;
}

bool BinaryWord::operator[](std::size_t pos) const {
  if (pos >= length_) throw std::out_of_range("binary word position out of range");
  std::size_t bit = length_ - 1 - pos;
  return (blocks_[bit / 64] >> (bit % 64)) & 1U;
}

void BinaryWord::set(std::size_t pos, bool value) {
  if (pos >= length_) throw std::out_of_range("binary word position out of range");
  std::size_t bit = length_ - 1 - pos;
  std::uint64_t mask = std::uint64_t{1} << (bit % 64);
  if (value) {
    blocks_[bit / 64] |= mask;
  } else {
    blocks_[bit / 64] &= ~mask;
  }
}

std::size_t BinaryWord::weight() const noexcept {
  std::size_t total = 0;
  for (std::uint64_t b : blocks_) total += static_cast<std::size_t>(std::popcount(b));
  return total;
}

std::string BinaryWord::to_string() const {
  std::string s(length_, '0');
  for (std::size_t i = 0; i < length_; ++i) {
    if ((*this)[i]) s[i] = '1';
  }
  return s;
}

bool BinaryWord::next() noexcept {
  if (length_ == 0) return false;
  for (auto& block : blocks_) {
    if (++block != 0) break;
  }
  std::size_t top_bits = length_ % 64;
  if (top_bits != 0) {
    std::uint64_t mask = (std::uint64_t{1} << top_bits) - 1;
    if (blocks_.back() > mask) {
      blocks_.back() &= mask;  // overflowed the word length: wrapped to zero
      return false;
    }
    return true;
  }
  return std::any_of(blocks_.begin(), blocks_.end(), [](std::uint64_t b) { return b != 0; });
}

std::size_t hamming(const BinaryWord& a, const BinaryWord& b) {
  if (a.size() != b.size()) {
    throw ValidationError("hamming distance of words with lengths " + std::to_string(a.size()) +
                          " and " + std::to_string(b.size()));
  }
  std::size_t total = 0;
  auto ab = a.blocks();
  auto bb = b.blocks();
  for (std::size_t i = 0; i < ab.size(); ++i) {
    total += static_cast<std::size_t>(std::popcount(ab[i] ^ bb[i]));
  }
  return total;
}

BinaryCode::BinaryCode(std::size_t length, std::vector<BinaryWord> words)
    : length_(length), words_(std::move(words)) {
  std::vector<std::vector<std::uint64_t>> keys;
  keys.reserve(words_.size());
  for (const auto& w : words_) {
    if (w.size() != length_) throw ValidationError("code word has the wrong length");
    keys.emplace_back(w.blocks().begin(), w.blocks().end());
  }
  std::sort(keys.begin(), keys.end());
  if (std::adjacent_find(keys.begin(), keys.end()) != keys.end()) {
    throw ValidationError("code contains a duplicate word");
  }
}

std::size_t BinaryCode::min_distance() const {
  std::size_t best = length_ + 1;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    for (std::size_t j = i + 1; j < words_.size(); ++j) {
      best = std::min(best, hamming(words_[i], words_[j]));
    }
  }
  return best;
}

SeparatedSet::SeparatedSet(BinaryCode code) : code_(std::move(code)) {
  const BinaryWord zero(code_.code_length());
  if (std::find(code_.words().begin(), code_.words().end(), zero) == code_.words().end()) {
    throw ValidationError("separated set must contain the zero word");
  }
  if (code_.size() > 1 && 8 * code_.min_distance() < code_.code_length()) {
    throw ValidationError("separated set has two words closer than D/8");
  }
}

SeparatedSet build_separated_set(std::size_t code_length, std::size_t target_size) {
  if (code_length == 0) throw ParameterError("code length D must be positive");
  if (!code_length_suffices(code_length, target_size)) {
    throw ParameterError("2^(D/8) >= M fails for D = " + std::to_string(code_length) +
                         ", M = " + std::to_string(target_size));
  }
  std::vector<BinaryWord> kept;
  kept.reserve(target_size);
  BinaryWord candidate(code_length);
  kept.push_back(candidate);
  while (kept.size() < target_size) {
    if (!candidate.next()) {
      throw ConstructionError("lexicographic scan of {0,1}^" + std::to_string(code_length) +
                              " ended with " + std::to_string(kept.size()) + " of " +
                              std::to_string(target_size) + " words");
    }
    bool separated = std::all_of(kept.begin(), kept.end(), [&](const BinaryWord& w) {
      return 8 * hamming(w, candidate) >= code_length;
    });
    if (separated) kept.push_back(candidate);
  }
  return SeparatedSet(BinaryCode(code_length, std::move(kept)));
}

PiecewiseFunction bump(const PerturbationFamily& family, std::size_t j) {
  const std::size_t d = family.code_length();
  if (j >= d) throw std::out_of_range("bump index " + std::to_string(j) + " >= D");
  std::vector<double> values(2 * d, 0.0);
  values[2 * j] = family.height();
  values[2 * j + 1] = -family.height();
  return {half_cell_grid(d), std::move(values)};
}

PiecewiseDensity perturbed_density(const PerturbationFamily& family, const BinaryWord& delta) {
  require_length(family, delta);
  const std::size_t d = family.code_length();
  const double a = family.height();
  std::vector<double> values(2 * d, 1.0);
  for (std::size_t j = 0; j < d; ++j) {
    if (delta[j]) {
      values[2 * j] = 1.0 + a;
      values[2 * j + 1] = 1.0 - a;
    }
  }
  return PiecewiseDensity(half_cell_grid(d), std::move(values));
}

double analytic_hellinger_sq(const PerturbationFamily& family, const BinaryWord& a,
                             const BinaryWord& b) {
  require_length(family, a);
  require_length(family, b);
  const double h = family.height();
  const double up = std::sqrt(1.0 + h);
  const double down = std::sqrt(1.0 - h);
  // 2 - sqrt(1+h) - sqrt(1-h), rewritten without cancellation.
  const double per_bump = 2.0 * h * h / ((up + down) * (1.0 + up) * (1.0 + down));
  return static_cast<double>(hamming(a, b)) / static_cast<double>(family.code_length()) * per_bump;
}

double analytic_l1(const PerturbationFamily& family, const BinaryWord& a, const BinaryWord& b) {
  require_length(family, a);
  require_length(family, b);
  const double d = static_cast<double>(family.code_length());
  return family.amplitude() / (d * d) * static_cast<double>(hamming(a, b));
}

double analytic_kl_product(const PerturbationFamily& family, const BinaryWord& delta,
                           std::size_t n) {
  require_length(family, delta);
  const double h = family.height();
  const double down = h < 1.0 ? (1.0 - h) * std::log1p(-h) : 0.0;
  const double per_bump = ((1.0 + h) * std::log1p(h) + down) /
                          (2.0 * static_cast<double>(family.code_length()));
  return static_cast<double>(n) * static_cast<double>(delta.weight()) * per_bump;
}

bool AuditReport::passed() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const AuditCheck& c) { return c.pass; });
}

std::vector<AuditCheck> AuditReport::violations() const {
  std::vector<AuditCheck> out;
  std::copy_if(checks.begin(), checks.end(), std::back_inserter(out),
               [](const AuditCheck& c) { return !c.pass; });
  return out;
}

AuditReport audit_lemma_hypotheses(const PerturbationFamily& family, const SeparatedSet& set,
                                   std::size_t n) {
  if (n == 0) throw ParameterError("audit needs sample size n >= 1");
  if (set.code_length() != family.code_length()) {
    throw ParameterError("separated set code length differs from the family's D");
  }
  const double log_m = std::log(static_cast<double>(set.size()));
  const double nn = static_cast<double>(n);
  const double d = static_cast<double>(family.code_length());
  const double tol = kAuditRelativeTolerance;
  auto at_most = [tol](double achieved, double bound) { return achieved <= bound * (1.0 + tol); };
  auto at_least = [tol](double achieved, double bound) { return achieved >= bound * (1.0 - tol); };

  AuditReport report{set.size(), n, family.bound().value(), family.code_length(),
                     family.amplitude(), {}};
  auto add = [&](std::string name, double bound, double achieved, bool pass) {
    report.checks.push_back({std::move(name), bound, achieved, pass});
  };

  const double kl_bound = log_m / 16.0;
  const double budget = nn * family.amplitude() * family.amplitude() / (d * d);
  add("kl_budget", kl_bound, budget, at_most(budget, kl_bound));

  for (std::size_t i = 0; i < set.size(); ++i) {
    double sup = perturbed_density(family, set[i]).function().sup_abs();
    add("membership[" + std::to_string(i) + "]", family.bound().value(), sup,
        sup <= family.bound().value());
  }
  for (std::size_t i = 0; i < set.size(); ++i) {
    double kl = analytic_kl_product(family, set[i], n);
    add("kl_product[" + std::to_string(i) + "]", kl_bound, kl, at_most(kl, kl_bound));
  }
  const double h_bound = kHellingerCurvature / 64.0 * log_m / nn;
  const double l1_bound = std::sqrt(log_m / nn) / 32.0;
  for (std::size_t i = 0; i < set.size(); ++i) {
    for (std::size_t j = i + 1; j < set.size(); ++j) {
      std::string pair = "[" + std::to_string(i) + "," + std::to_string(j) + "]";
      double h2 = analytic_hellinger_sq(family, set[i], set[j]);
      add("hellinger_sq" + pair, h_bound, h2, at_least(h2, h_bound));
      double v = analytic_l1(family, set[i], set[j]);
      add("l1" + pair, l1_bound, v, at_least(v, l1_bound));
    }
  }
  return report;
}

}  // namespace densagg
