#include "kext/extractor.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <sstream>

#include "kext/errors.hpp"

namespace kext {

int ceil_log2_pow(int n, int c) {
  if (n < 1) throw std::invalid_argument("ceil_log2_pow: n >= 1 required");
  if (c < 0) throw std::invalid_argument("ceil_log2_pow: c >= 0 required");
  unsigned __int128 power = 1;
  for (int i = 0; i < c; ++i) {
    power *= static_cast<unsigned>(n);
    if (power > (static_cast<unsigned __int128>(1) << 100))
      throw std::invalid_argument("ceil_log2_pow: n^c out of range");
  }
  int t = 0;
  while ((static_cast<unsigned __int128>(1) << t) < power) ++t;
  return t;
}

int ExtractorParams::d() const { return delta + ceil_log2_pow(n, c); }

std::vector<std::string> ExtractorParams::regime_warnings() const {
  std::vector<std::string> warnings;
  if (k <= 1) warnings.push_back("k <= 1: the extractor premise wants k > 1");
  if (delta <= 1) warnings.push_back("delta <= 1: the extractor premise wants delta > 1");
  if (q() < 1)
    warnings.push_back("q = m - d = " + std::to_string(q()) +
                       " < 1: the working palette is empty at these parameters");
  if (pair_l_max < 2 * (l_max + 1) - delta)
    warnings.push_back("pair_l_max < 2*(l_max+1) - delta: some pair queries may exceed the "
                       "enumerated bound");
  return warnings;
}

void ExtractorParams::validate() const {
  if (n < 1 || n > 10) throw ConfigError("ExtractorParams: n out of [1, 10]");
  if (m < 1 || m > 20) throw ConfigError("ExtractorParams: m out of [1, 20]");
  if (s < 1) throw ConfigError("ExtractorParams: s >= 1 required");
  if (k < 1) throw ConfigError("ExtractorParams: k >= 1 required");
  if (delta < 0) throw ConfigError("ExtractorParams: delta >= 0 required");
  if (c < 0) throw ConfigError("ExtractorParams: c >= 0 required");
  if (mu < 1) throw ConfigError("ExtractorParams: mu >= 1 required");
  if (l_max < 1) throw ConfigError("ExtractorParams: l_max >= 1 required");
  if (pair_l_max < 0) throw ConfigError("ExtractorParams: pair_l_max >= 0 required");
  if (b_mult.num() <= 0) throw ConfigError("ExtractorParams: b_mult must be positive");
}

BvmOracle BvmOracle::build(const ExtractorParams& params, const std::string& cache_dir, int jobs) {
  params.validate();
  BvmOracle oracle;
  oracle.n_ = params.n;
  oracle.m_ = params.m;
  BitString empty;
  oracle.input_profile_ = cached_profile(cache_dir, params.n, empty, params.s, params.l_max, jobs);
  oracle.colour_profile_ = cached_profile(cache_dir, params.m, empty, params.s, params.l_max, jobs);
  for (std::uint32_t v = 0; v < (1u << params.n); ++v) {
    BitString condition = BitString::from_value(v, params.n);
    oracle.conditional_profiles_.emplace(
        v, cached_profile(cache_dir, params.m, condition, params.s, params.l_max, jobs));
  }
  oracle.pairs_ = pair_complexity_table(params.n, params.mu * params.s, params.pair_l_max, jobs);
  return oracle;
}

int BvmOracle::plain(const BitString& x) const {
  if (x.size() == n_) return input_profile_.values[x.value()];
  if (x.size() == m_) return colour_profile_.values[x.value()];
  throw std::invalid_argument("BvmOracle::plain: string length is neither n nor m");
}

int BvmOracle::conditional(const BitString& w, const BitString& v) const {
  if (w.size() != m_) throw std::invalid_argument("BvmOracle::conditional: colour length mismatch");
  if (v.size() != n_) throw std::invalid_argument("BvmOracle::conditional: condition length mismatch");
  return conditional_profiles_.at(static_cast<std::uint32_t>(v.value())).values[w.value()];
}

bool BvmOracle::pair_above(const BitString& x, const BitString& y, int threshold) const {
  if (x.size() != n_ || y.size() != n_)
    throw std::invalid_argument("BvmOracle::pair_above: string length mismatch");
  if (threshold < 0) return true;
  return pairs_.pair_above(static_cast<std::uint32_t>(x.value()),
                           static_cast<std::uint32_t>(y.value()), threshold);
}

int StubOracle::plain(const BitString& x) const {
  auto it = plain_.find(x);
  return it == plain_.end() ? kInfinite : it->second;
}

int StubOracle::conditional(const BitString& w, const BitString& v) const {
  auto it = cond_.find({w, v});
  return it == cond_.end() ? kInfinite : it->second;
}

bool StubOracle::pair_above(const BitString& x, const BitString& y, int threshold) const {
  auto it = pair_min_.find({x, y});
  if (it == pair_min_.end()) return true;  // unplanted pairs are infinitely complex
  return it->second > threshold;
}

StubOracle StubOracle::load(std::istream& in) {
  StubOracle oracle;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string kind;
    if (!(ls >> kind)) continue;
    auto fail = [&](const std::string& why) -> IoError {
      return IoError("stub oracle line " + std::to_string(line_no) + ": " + why);
    };
    if (kind == "plain") {
      std::string xs;
      int value;
      if (!(ls >> xs >> value)) throw fail("expected 'plain <len:hex> <int>'");
      oracle.set_plain(from_len_hex(xs), value);
    } else if (kind == "cond") {
      std::string ws, vs;
      int value;
      if (!(ls >> ws >> vs >> value)) throw fail("expected 'cond <len:hex> <len:hex> <int>'");
      oracle.set_conditional(from_len_hex(ws), from_len_hex(vs), value);
    } else if (kind == "pairmin") {
      std::string xs, ys;
      int value;
      if (!(ls >> xs >> ys >> value)) throw fail("expected 'pairmin <len:hex> <len:hex> <int>'");
      oracle.set_pair_min(from_len_hex(xs), from_len_hex(ys), value);
    } else {
      throw fail("unknown record '" + kind + "'");
    }
  }
  return oracle;
}

StubOracle StubOracle::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("StubOracle::load_file: cannot open " + path);
  return load(in);
}

void StubOracle::save(std::ostream& out) const {
  for (const auto& [x, v] : plain_) out << "plain " << to_len_hex(x) << " " << v << "\n";
  for (const auto& [key, v] : cond_)
    out << "cond " << to_len_hex(key.first) << " " << to_len_hex(key.second) << " " << v << "\n";
  for (const auto& [key, v] : pair_min_)
    out << "pairmin " << to_len_hex(key.first) << " " << to_len_hex(key.second) << " " << v << "\n";
}

bool qualifies(const BitString& x, const BitString& y, const ExtractorParams& params,
               const ComplexityOracle& oracle) {
  int l1 = oracle.plain(x);
  int l2 = oracle.plain(y);
  if (l1 <= params.k || l2 <= params.k) return false;
  return oracle.pair_above(x, y, l1 + l2 - params.delta);
}

namespace {

VerificationReport verify_impl(const Table& t, const ExtractorParams& params,
                               const ComplexityOracle& oracle, bool strong) {
  if (t.n() != params.n || t.m() != params.m)
    throw std::invalid_argument("verify: table dimensions do not match params");
  VerificationReport report;
  const int q = params.q();
  const std::uint32_t side = t.side();
  for (std::uint32_t xv = 0; xv < side; ++xv) {
    BitString x = BitString::from_value(xv, params.n);
    for (std::uint32_t yv = 0; yv < side; ++yv) {
      BitString y = BitString::from_value(yv, params.n);
      if (!qualifies(x, y, params, oracle)) continue;
      ++report.qualifying_pairs;
      std::uint32_t colour = t.cell(xv, yv);
      BitString w = BitString::from_value(colour, params.m);
      if (!strong) {
        int value = oracle.plain(w);
        if (value < q)
          report.violations.push_back({x, y, colour, ViolationKind::Plain, value});
      } else {
        int against_x = oracle.conditional(w, x);
        if (against_x < q)
          report.violations.push_back({x, y, colour, ViolationKind::Column, against_x});
        int against_y = oracle.conditional(w, y);
        if (against_y < q)
          report.violations.push_back({x, y, colour, ViolationKind::Row, against_y});
      }
    }
  }
  report.vacuous = report.qualifying_pairs == 0;
  return report;
}

}  // namespace

VerificationReport verify_plain(const Table& t, const ExtractorParams& params,
                                const ComplexityOracle& oracle) {
  return verify_impl(t, params, oracle, false);
}

VerificationReport verify_strong(const Table& t, const ExtractorParams& params,
                                 const ComplexityOracle& oracle) {
  return verify_impl(t, params, oracle, true);
}

const char* cell_mode_name(CellMode mode) {
  switch (mode) {
    case CellMode::PlainCell: return "plain_cell";
    case CellMode::RowCell: return "row_cell";
    case CellMode::SaturatedRowCell: return "saturated_row_cell";
    case CellMode::ColumnCell: return "column_cell";
    case CellMode::SaturatedColumnCell: return "saturated_column_cell";
  }
  return "?";
}

namespace {

int bit_length(long long v) {
  int bits = 0;
  while (v > 0) {
    ++bits;
    v >>= 1;
  }
  return bits;
}

const LevelSet& set_at_level(const Systems& systems, int level) {
  for (const LevelSet& s : systems.s.pairs)
    if (s.level == level) return s;
  throw LevelOutOfRange("no level set at level " + std::to_string(level));
}

int minimal_containing_level(const Systems& systems, std::uint32_t value) {
  int best = -1;
  for (const LevelSet& s : systems.s.pairs)
    if (s.contains(value) && (best == -1 || s.level < best)) best = s.level;
  if (best == -1)
    throw LevelOutOfRange("string " + std::to_string(value) + " belongs to no level set");
  return best;
}

const RainbowTuple& tuple_at_level(const Systems& systems, int level) {
  for (const RainbowTuple& tuple : systems.r.tuples)
    if (tuple.anchor.level == level) return tuple;
  throw LevelOutOfRange("no rainbow tuple anchored at level " + std::to_string(level));
}

/// Membership predicate of one certificate mode over S1(l1) x S2(l2),
/// with saturation flags precomputed where the mode needs them.
struct CellPredicate {
  const LevelSet* s1;
  const LevelSet* s2;
  int palette_level;
  std::function<bool(std::size_t s1_pos, std::size_t s2_pos)> member;
};

CellPredicate make_predicate(const Table& t, const Systems& systems, const ExtractorParams& params,
                             CellMode mode, int l1, int l2) {
  CellPredicate pred;
  pred.s1 = &set_at_level(systems, l1);
  pred.s2 = &set_at_level(systems, l2);
  const LevelSet& s1 = *pred.s1;
  const LevelSet& s2 = *pred.s2;

  if (mode == CellMode::PlainCell) {
    if (systems.q.palettes.empty())
      throw LevelOutOfRange("describe_cell: no working palette in systems");
    const Palette* palette = &systems.q.palettes.front();
    pred.palette_level = palette->level;
    pred.member = [&t, &s1, &s2, palette](std::size_t i, std::size_t j) {
      return palette->contains(t.cell(s1.members[i], s2.members[j]));
    };
    return pred;
  }

  const bool row_side = mode == CellMode::RowCell || mode == CellMode::SaturatedRowCell;
  const RainbowTuple& tuple = tuple_at_level(systems, row_side ? l2 : l1);
  const LevelSet& anchor = tuple.anchor;
  const LevelSet& expected = row_side ? s2 : s1;
  if (anchor.members != expected.members)
    throw LevelOutOfRange("describe_cell: tuple anchor differs from the level set");
  pred.palette_level = tuple.level;

  auto marked = [&t, &tuple, row_side, &s1, &s2](std::size_t i, std::size_t j) {
    // Row modes: palettes attach to rows (S2); column modes: to columns (S1).
    const Palette& palette = tuple.palettes[row_side ? j : i];
    return palette.contains(t.cell(s1.members[i], s2.members[j]));
  };

  if (mode == CellMode::RowCell || mode == CellMode::ColumnCell) {
    pred.member = marked;
    return pred;
  }

  // Saturation: marked count of the anchored line across the free side,
  // strictly above b_mult * 2^(l_free + q - m).
  const int l_free = row_side ? l1 : l2;
  const std::size_t lines = anchor.members.size();
  const std::size_t free_count = (row_side ? s1 : s2).members.size();
  auto saturated = std::make_shared<std::vector<std::uint8_t>>(lines, 0);
  for (std::size_t line = 0; line < lines; ++line) {
    long long count = 0;
    for (std::size_t f = 0; f < free_count; ++f)
      count += row_side ? marked(f, line) : marked(line, f);
    (*saturated)[line] =
        exceeds_threshold(count, l_free + tuple.level - t.m(), params.b_mult) ? 1 : 0;
  }
  pred.member = [marked, saturated, row_side](std::size_t i, std::size_t j) {
    return (*saturated)[row_side ? j : i] && marked(i, j);
  };
  return pred;
}

}  // namespace

int Certificate::encoded_bits() const {
  int header = 0;
  while ((1 << header) < n + 2) ++header;
  return bit_length(ordinal) + 4 * header + 8;
}

Certificate describe_cell(const Table& t, const BitString& x, const BitString& y,
                          const Systems& systems, const ExtractorParams& params, CellMode mode) {
  if (x.size() != t.n() || y.size() != t.n())
    throw std::invalid_argument("describe_cell: coordinate length mismatch");
  const std::uint32_t xv = static_cast<std::uint32_t>(x.value());
  const std::uint32_t yv = static_cast<std::uint32_t>(y.value());
  const int l1 = minimal_containing_level(systems, xv);
  const int l2 = minimal_containing_level(systems, yv);
  CellPredicate pred = make_predicate(t, systems, params, mode, l1, l2);

  long long ordinal = 0;
  for (std::size_t i = 0; i < pred.s1->members.size(); ++i) {
    for (std::size_t j = 0; j < pred.s2->members.size(); ++j) {
      bool is_target = pred.s1->members[i] == xv && pred.s2->members[j] == yv;
      bool is_member = pred.member(i, j);
      if (is_target) {
        if (!is_member)
          throw NotAMember("describe_cell: (" + x.str() + ", " + y.str() +
                           ") fails the membership predicate of " + cell_mode_name(mode));
        Certificate cert;
        cert.n = t.n();
        cert.l1 = l1;
        cert.l2 = l2;
        cert.q = pred.palette_level;
        cert.ordinal = ordinal;
        cert.mode = mode;
        return cert;
      }
      ordinal += is_member;
    }
  }
  throw NotAMember("describe_cell: cell not inside S1 x S2");
}

std::pair<BitString, BitString> reconstruct_cell(const Certificate& cert, const Table& t,
                                                 const Systems& systems,
                                                 const ExtractorParams& params) {
  CellPredicate pred = make_predicate(t, systems, params, cert.mode, cert.l1, cert.l2);
  long long ordinal = 0;
  for (std::size_t i = 0; i < pred.s1->members.size(); ++i) {
    for (std::size_t j = 0; j < pred.s2->members.size(); ++j) {
      if (!pred.member(i, j)) continue;
      if (ordinal == cert.ordinal)
        return {BitString::from_value(pred.s1->members[i], t.n()),
                BitString::from_value(pred.s2->members[j], t.n())};
      ++ordinal;
    }
  }
  throw OrdinalOutOfRange("reconstruct_cell: only " + std::to_string(ordinal) +
                          " cells satisfy the predicate, ordinal " + std::to_string(cert.ordinal) +
                          " does not exist");
}

AuditReport dichotomy_audit(const Table& t, const ExtractorParams& params,
                            const ComplexityOracle& oracle, const Systems& systems) {
  AuditReport report;
  report.goodness_ok = is_weak_balanced(t, systems.s, systems.q, params.b_mult).balanced;
  if (systems.s.pairs.empty()) return report;

  const LevelSet* max_set = &systems.s.pairs.front();
  for (const LevelSet& s : systems.s.pairs)
    if (s.level > max_set->level) max_set = &s;
  const int q = params.q();
  const int d = params.d();
  int header = 0;
  while ((1 << header) < params.n + 2) ++header;
  const int overhead = 4 * header + 8;
  report.certificate_bit_bound = 2 * max_set->level - d + overhead;

  for (std::uint32_t xv : max_set->members) {
    BitString x = BitString::from_value(xv, params.n);
    for (std::uint32_t yv : max_set->members) {
      BitString y = BitString::from_value(yv, params.n);
      ++report.cells_checked;
      std::uint32_t colour = t.cell(xv, yv);
      BitString w = BitString::from_value(colour, params.m);
      if (oracle.plain(w) >= q) continue;  // first arm: colour complex enough
      ++report.simple_colour_cells;
      try {
        Certificate cert = describe_cell(t, x, y, systems, params, CellMode::PlainCell);
        ++report.certificates_audited;
        int bits = cert.encoded_bits();
        report.max_certificate_bits = std::max(report.max_certificate_bits, bits);
        int bound = cert.l1 + cert.l2 - d + overhead;
        if (bits > bound)
          report.dual_violations.push_back(
              {x, y, colour,
               "certificate needs " + std::to_string(bits) + " bits, bound " + std::to_string(bound)});
      } catch (const NotAMember&) {
        report.dual_violations.push_back(
            {x, y, colour, "simple colour outside the working palette"});
      } catch (const LevelOutOfRange& e) {
        report.dual_violations.push_back({x, y, colour, e.what()});
      }
    }
  }
  return report;
}

Systems systems_from_oracle(const ComplexityOracle& oracle, const ExtractorParams& params,
                            bool with_tuples) {
  Systems systems;
  const std::uint32_t inputs = 1u << params.n;
  const std::uint32_t colours = 1u << params.m;
  std::vector<int> plain_inputs(inputs);
  for (std::uint32_t v = 0; v < inputs; ++v)
    plain_inputs[v] = oracle.plain(BitString::from_value(v, params.n));

  systems.s.origin = "oracle levels " + std::to_string(params.k) + ".." + std::to_string(params.l_max);
  for (int level = params.k; level <= params.l_max; ++level) {
    LevelSet set;
    set.n = params.n;
    set.level = level;
    for (std::uint32_t v = 0; v < inputs; ++v)
      if (plain_inputs[v] < level) set.members.push_back(v);
    set.validate();
    systems.s.pairs.push_back(std::move(set));
  }

  Palette palette;
  palette.m = params.m;
  palette.level = std::max(params.q(), 0);
  for (std::uint32_t w = 0; w < colours; ++w)
    if (oracle.plain(BitString::from_value(w, params.m)) < params.q()) palette.colours.push_back(w);
  palette.validate();
  systems.q.palettes.push_back(std::move(palette));

  if (with_tuples) {
    for (const LevelSet& anchor : systems.s.pairs) {
      RainbowTuple tuple;
      tuple.anchor = anchor;
      tuple.level = std::max(params.q(), 0);
      for (std::uint32_t member : anchor.members) {
        BitString v = BitString::from_value(member, params.n);
        Palette p;
        p.m = params.m;
        p.level = tuple.level;
        for (std::uint32_t w = 0; w < colours; ++w)
          if (oracle.conditional(BitString::from_value(w, params.m), v) < params.q())
            p.colours.push_back(w);
        p.validate();
        tuple.palettes.push_back(std::move(p));
      }
      tuple.validate();
      systems.r.tuples.push_back(std::move(tuple));
    }
  }
  return systems;
}

}  // namespace kext
