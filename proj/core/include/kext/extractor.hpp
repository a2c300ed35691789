#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "kext/bitstring.hpp"
#include "kext/complexity.hpp"
#include "kext/seedsearch.hpp"
#include "kext/table.hpp"

namespace kext {

/// Parameters of one extractor experiment. d and q are derived:
/// d = delta + ceil(c * log2 n), q = m - d.
struct ExtractorParams {
  int n = 0;
  int m = 0;
  int s = 1;
  int k = 1;
  int delta = 1;
  int c = 2;
  int mu = 4;
  int l_max = 0;
  int pair_l_max = 0;
  Rational b_mult{201, 100};

  int d() const;
  int q() const { return m - d(); }

  /// Regime warnings (q < 1, delta <= 1, ...): the theorem's constraints do
  /// not all fit on a desk, so these are reported, not fatal.
  std::vector<std::string> regime_warnings() const;
  /// Structural validation; throws ConfigError.
  void validate() const;
};

/// Smallest t with 2^t >= n^c, i.e. ceil(c * log2 n), computed exactly.
int ceil_log2_pow(int n, int c);

/// The three complexity queries the verifier needs. pair_above(x, y, t)
/// decides KS^{mu*s}(pair(x,y)) > t and must be monotone in t.
class ComplexityOracle {
 public:
  virtual ~ComplexityOracle() = default;
  virtual int plain(const BitString& x) const = 0;
  virtual int conditional(const BitString& w, const BitString& v) const = 0;
  virtual bool pair_above(const BitString& x, const BitString& y, int threshold) const = 0;
};

/// Production oracle backed by exhaustive machine enumeration: plain profiles
/// for input length n and colour length m, conditional colour profiles per
/// n-bit condition, and a shared pair-complexity pass at space mu*s.
class BvmOracle : public ComplexityOracle {
 public:
  static BvmOracle build(const ExtractorParams& params, const std::string& cache_dir = "",
                         int jobs = 1);

  int plain(const BitString& x) const override;
  int conditional(const BitString& w, const BitString& v) const override;
  bool pair_above(const BitString& x, const BitString& y, int threshold) const override;

  const ComplexityProfile& input_profile() const { return input_profile_; }
  const ComplexityProfile& colour_profile() const { return colour_profile_; }
  const std::map<std::uint32_t, ComplexityProfile>& conditional_profiles() const {
    return conditional_profiles_;
  }
  const PairComplexityTable& pairs() const { return pairs_; }

 private:
  int n_ = 0, m_ = 0;
  ComplexityProfile input_profile_;
  ComplexityProfile colour_profile_;
  std::map<std::uint32_t, ComplexityProfile> conditional_profiles_;
  PairComplexityTable pairs_;
};

/// Test oracle with planted values. Entries missing from the maps default to
/// "effectively infinite", which qualifies every pair and violates nothing.
class StubOracle : public ComplexityOracle {
 public:
  static constexpr int kInfinite = 1 << 20;

  int plain(const BitString& x) const override;
  int conditional(const BitString& w, const BitString& v) const override;
  bool pair_above(const BitString& x, const BitString& y, int threshold) const override;

  void set_plain(const BitString& x, int value) { plain_[x] = value; }
  void set_conditional(const BitString& w, const BitString& v, int value) { cond_[{w, v}] = value; }
  void set_pair_min(const BitString& x, const BitString& y, int value) { pair_min_[{x, y}] = value; }

  // Stub file format: lines "plain <len:hex> <int>", "cond <len:hex>
  // <len:hex> <int>", "pairmin <len:hex> <len:hex> <int>"; '#' comments.
  static StubOracle load(std::istream& in);
  static StubOracle load_file(const std::string& path);
  void save(std::ostream& out) const;

 private:
  std::map<BitString, int> plain_;
  std::map<std::pair<BitString, BitString>, int> cond_;
  std::map<std::pair<BitString, BitString>, int> pair_min_;
};

/// The extractor premise: KS^s(x) > k, KS^s(y) > k, and the pair complexity
/// at space mu*s exceeds KS^s(x) + KS^s(y) - delta.
bool qualifies(const BitString& x, const BitString& y, const ExtractorParams& params,
               const ComplexityOracle& oracle);

enum class ViolationKind { Plain, Row, Column };

struct ExtractorViolation {
  BitString x;
  BitString y;
  std::uint32_t colour = 0;
  ViolationKind kind = ViolationKind::Plain;
  int value = 0;  // the offending complexity value (< q)
};

struct VerificationReport {
  long long qualifying_pairs = 0;
  bool vacuous = true;
  std::vector<ExtractorViolation> violations;
  long long certificates_audited = 0;
  int max_certificate_bits = 0;
};

/// Plain extractor check: every qualifying pair's colour must satisfy
/// KS^s(colour) >= q.
VerificationReport verify_plain(const Table& t, const ExtractorParams& params,
                                const ComplexityOracle& oracle);

/// Strong check: conditional colour complexity against both coordinates,
/// violations tagged per direction.
VerificationReport verify_strong(const Table& t, const ExtractorParams& params,
                                 const ComplexityOracle& oracle);

enum class CellMode { PlainCell, RowCell, SaturatedRowCell, ColumnCell, SaturatedColumnCell };

const char* cell_mode_name(CellMode mode);

/// The short description of one cell: its 0-based ordinal among the cells of
/// S1(l1) x S2(l2) (S1 ascending outer, S2 ascending inner) satisfying the
/// mode's membership predicate.
struct Certificate {
  int n = 0;
  int l1 = 0;
  int l2 = 0;
  int q = 0;
  long long ordinal = 0;
  CellMode mode = CellMode::PlainCell;

  /// Accounting size: bits(ordinal) + 4*ceil(log2(n+2)) + 8.
  int encoded_bits() const;
};

Certificate describe_cell(const Table& t, const BitString& x, const BitString& y,
                          const Systems& systems, const ExtractorParams& params, CellMode mode);

std::pair<BitString, BitString> reconstruct_cell(const Certificate& cert, const Table& t,
                                                 const Systems& systems,
                                                 const ExtractorParams& params);

struct DualViolation {
  BitString x;
  BitString y;
  std::uint32_t colour = 0;
  std::string reason;
};

struct AuditReport {
  bool goodness_ok = true;       // weak balance re-checked on entry
  long long cells_checked = 0;
  long long simple_colour_cells = 0;
  long long certificates_audited = 0;
  int max_certificate_bits = 0;
  int certificate_bit_bound = 0;  // l1+l2-d+overhead at the maximal levels
  std::vector<DualViolation> dual_violations;
};

/// The dichotomy behind the main counting argument: over the rectangle of
/// maximal-level sets, every cell either has a colour of complexity >= q or
/// admits a certificate within the bit bound. Tables passing the goodness
/// check must produce zero dual violations.
AuditReport dichotomy_audit(const Table& t, const ExtractorParams& params,
                            const ComplexityOracle& oracle, const Systems& systems);

/// Systems built by querying the oracle over full domains: level sets from
/// plain values of n-bit strings, the working palette from plain values of
/// m-bit strings, and per-level conditional tuples when `with_tuples`.
Systems systems_from_oracle(const ComplexityOracle& oracle, const ExtractorParams& params,
                            bool with_tuples);

}  // namespace kext
