#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "densagg/piecewise.hpp"

namespace densagg {

/// alpha = 8^(-3/2): the curvature constant of the Hellinger lower bound.
inline constexpr double kHellingerCurvature = 0.044194173824159216;

/// Smallest D with 2^(D/8) >= M.
std::size_t min_code_length(std::size_t target_size);

/// Parameters (D, L, A, n, M) of the perturbed family
///   f_delta = 1 + sum_j delta_j h_j  on [0, 1],
/// where h_j is +L/D on the left half of [j/D, (j+1)/D) and -L/D on the right
/// half (0-based j). Invariants: D = min_code_length(M) and L <= D min(1, A-1).
class PerturbationFamily {
 public:
  PerturbationFamily(std::size_t code_length, double amplitude, BoundParameter bound,
                     std::size_t sample_size, std::size_t target_size);

  std::size_t code_length() const noexcept { return d_; }   // D
  double amplitude() const noexcept { return l_; }           // L
  double height() const noexcept { return l_ / static_cast<double>(d_); }  // L / D
  BoundParameter bound() const noexcept { return bound_; }
  std::size_t sample_size() const noexcept { return n_; }
  std::size_t target_size() const noexcept { return m_; }

 private:
  std::size_t d_;
  double l_;
  BoundParameter bound_;
  std::size_t n_;
  std::size_t m_;
};

/// D = min_code_length(M), L = (D/4) sqrt(log M / n). Throws ParameterError
/// unless M >= 2, n >= 1 and log M <= 16 min(1, A-1)^2 n.
PerturbationFamily choose_parameters(std::size_t target_size, std::size_t sample_size,
                                     BoundParameter bound);

/// A word of {0,1}^D. Position 0 is delta_1 and is the most significant bit
/// of the lexicographic order used by next().
class BinaryWord {
 public:
  explicit BinaryWord(std::size_t length);
  static BinaryWord from_string(std::string_view bits);

  std::size_t size() const noexcept { return length_; }
  bool operator[](std::size_t pos) const;
  void set(std::size_t pos, bool bit);
  std::size_t weight() const noexcept;
  std::string to_string() const;

  /// Advance to the lexicographic successor. Returns false (and wraps to the
  /// zero word) after the all-ones word.
  bool next() noexcept;

  std::span<const std::uint64_t> blocks() const noexcept { return blocks_; }
  friend bool operator==(const BinaryWord&, const BinaryWord&) = default;

 private:
  std::size_t length_;
  std::vector<std::uint64_t> blocks_;  // integer value, least significant block first
};

/// rho(a, b) = #{i : a_i != b_i}. Throws ValidationError on a length mismatch.
std::size_t hamming(const BinaryWord& a, const BinaryWord& b);

/// Distinct words of a common length D.
class BinaryCode {
 public:
  BinaryCode(std::size_t length, std::vector<BinaryWord> words);

  std::size_t code_length() const noexcept { return length_; }
  std::size_t size() const noexcept { return words_.size(); }
  std::span<const BinaryWord> words() const noexcept { return words_; }
  const BinaryWord& operator[](std::size_t i) const { return words_[i]; }
  std::size_t min_distance() const;

 private:
  std::size_t length_;
  std::vector<BinaryWord> words_;
};

/// A code containing the zero word whose distinct words are pairwise at
/// Hamming distance >= D/8 (real-valued comparison).
class SeparatedSet {
 public:
  explicit SeparatedSet(BinaryCode code);

  const BinaryCode& code() const noexcept { return code_; }
  std::size_t code_length() const noexcept { return code_.code_length(); }
  double threshold() const noexcept { return static_cast<double>(code_length()) / 8.0; }
  std::size_t size() const noexcept { return code_.size(); }
  std::span<const BinaryWord> words() const noexcept { return code_.words(); }
  const BinaryWord& operator[](std::size_t i) const { return code_[i]; }

 private:
  BinaryCode code_;
};

/// Greedy Gilbert-Varshamov packing: scan {0,1}^D in lexicographic order from
/// the zero word, keep every word at distance >= D/8 from all kept words, and
/// stop at M words. Throws ParameterError unless 2^(D/8) >= M, and
/// ConstructionError if the scan is exhausted first.
SeparatedSet build_separated_set(std::size_t code_length, std::size_t target_size);

/// h_j for 0-based j < D. Throws std::out_of_range otherwise.
PiecewiseFunction bump(const PerturbationFamily& family, std::size_t j);

/// f_delta on the uniform grid of 2D cells. Throws ValidationError if the
/// word length is not D.
PiecewiseDensity perturbed_density(const PerturbationFamily& family, const BinaryWord& delta);

/// H^2(f_a, f_b) = (rho / D)(2 - sqrt(1 + a) - sqrt(1 - a)), a = L/D.
double analytic_hellinger_sq(const PerturbationFamily& family, const BinaryWord& a,
                             const BinaryWord& b);

/// v(f_a, f_b) = (L / D^2) rho.
double analytic_l1(const PerturbationFamily& family, const BinaryWord& a, const BinaryWord& b);

/// K(P_delta^n | P_0^n) = n |delta| ((1+a) log(1+a) + (1-a) log(1-a)) / (2D).
double analytic_kl_product(const PerturbationFamily& family, const BinaryWord& delta,
                           std::size_t n);

struct AuditCheck {
  std::string name;
  double bound;
  double achieved;
  bool pass;
};

struct AuditReport {
  std::size_t target_size;   // M
  std::size_t sample_size;   // n
  double bound;              // A
  std::size_t code_length;   // D
  double amplitude;          // L
  std::vector<AuditCheck> checks;

  bool passed() const noexcept;
  std::vector<AuditCheck> violations() const;
};

/// Comparisons in the audit allow this relative slack: with L chosen by
/// choose_parameters, kl_budget and the l1 checks hold with equality.
inline constexpr double kAuditRelativeTolerance = 1e-12;

/// Evaluates the sufficient conditions of the minimax reduction on the
/// family indexed by `set`, with M = set.size():
///   kl_budget:         n L^2 / D^2 <= log(M) / 16
///   membership[i]:     sup f_i <= A
///   kl_product[i]:     K(P_i^n | P_0^n) <= log(M) / 16
///   hellinger_sq[i,j]: H^2(f_i, f_j) >= (alpha / 64) log(M) / n
///   l1[i,j]:           v(f_i, f_j) >= (1/32) sqrt(log(M) / n)
/// Violations are reported, never thrown. Throws ParameterError if n == 0 or
/// the set's code length differs from D.
AuditReport audit_lemma_hypotheses(const PerturbationFamily& family, const SeparatedSet& set,
                                   std::size_t n);

}  // namespace densagg
