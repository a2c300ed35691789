#include "kext/complexity.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "kext/errors.hpp"
#include "kext/parallel.hpp"

namespace kext {

namespace {

// Longest decodable instruction list for a raw length: every 3 bits can
// start a plain instruction.
int instruction_bound(int raw_len) { return raw_len / 3 + 1; }

RunBudget budget_for(int s, int raw_len, int input_len, long long output_cap) {
  return RunBudget{s, max_steps(s, instruction_bound(raw_len), input_len), output_cap};
}

}  // namespace

int ComplexityProfile::value_of(const BitString& x) const {
  if (x.size() != n) throw std::invalid_argument("ComplexityProfile: string length mismatch");
  return values[x.value()];
}

long long ComplexityProfile::count_below(int level) const {
  long long c = 0;
  for (int v : values) c += v < level;
  return c;
}

void ComplexityProfile::validate() const {
  if (values.size() != (static_cast<std::size_t>(1) << n))
    throw InvariantViolation("ComplexityProfile: wrong value count");
  for (int v : values)
    if (v < 0 || v > l_max + 1) throw InvariantViolation("ComplexityProfile: value out of range");
  for (int level = 0; level <= l_max; ++level)
    if (count_below(level) > (1ll << level) - 1)
      throw InvariantViolation("ComplexityProfile: counting bound violated at level " +
                               std::to_string(level));
}

int ks(const BitString& x, const BitString& condition, int s, int l_max) {
  if (s < 1) throw std::invalid_argument("ks: requires s >= 1");
  if (l_max < 0 || l_max > 30) throw BudgetTooLarge("ks: l_max out of [0, 30]");
  Runner runner;
  std::vector<Instruction> code;
  const auto& in = condition.bits();
  for (int len = 0; len <= l_max; ++len) {
    RunBudget budget = budget_for(s, len, condition.size(), x.size());
    for (std::uint64_t value = 0; value < (1ull << len); ++value) {
      decode_program_value(value, len, code);
      if (runner.run_code(code, in, budget) != Outcome::Halted) continue;
      const auto& out = runner.output_scratch();
      if (static_cast<int>(out.size()) != x.size()) continue;
      if (std::equal(out.begin(), out.end(), x.bits().begin())) return len;
    }
  }
  return l_max + 1;
}

ComplexityProfile complexity_profile(int n, const BitString& condition, int s, int l_max,
                                     int jobs, int hard_cap) {
  if (s < 1) throw std::invalid_argument("complexity_profile: requires s >= 1");
  if (n < 0 || n > 20) throw std::invalid_argument("complexity_profile: n out of [0, 20]");
  if (l_max < 0 || l_max > hard_cap)
    throw BudgetTooLarge("complexity_profile: l_max " + std::to_string(l_max) + " exceeds cap " +
                         std::to_string(hard_cap));
  ComplexityProfile profile;
  profile.n = n;
  profile.condition = condition;
  profile.s = s;
  profile.l_max = l_max;
  profile.values.assign(static_cast<std::size_t>(1) << n, l_max + 1);

  const std::size_t domain = profile.values.size();
  std::size_t assigned = 0;
  for (int len = 0; len <= l_max && assigned < domain; ++len) {
    RunBudget budget = budget_for(s, len, condition.size(), n);
    const std::uint64_t total = 1ull << len;
    // Candidates found at this length; min-per-output reduces to an OR, so
    // chunk merges are order-independent.
    std::vector<std::uint8_t> seen(domain, 0);
    parallel_chunks(0, total, jobs, [&](std::uint64_t begin, std::uint64_t end, int) {
      Runner runner;
      std::vector<Instruction> code;
      std::vector<std::uint8_t> local(domain, 0);
      for (std::uint64_t value = begin; value < end; ++value) {
        decode_program_value(value, len, code);
        if (runner.run_code(code, condition.bits(), budget) != Outcome::Halted) continue;
        const auto& out = runner.output_scratch();
        if (static_cast<int>(out.size()) != n) continue;
        std::uint64_t v = 0;
        for (std::uint8_t b : out) v = (v << 1) | b;
        local[v] = 1;
      }
      static std::mutex merge_mutex;
      std::scoped_lock lock(merge_mutex);
      for (std::size_t i = 0; i < domain; ++i) seen[i] |= local[i];
    });
    for (std::size_t i = 0; i < domain; ++i) {
      if (seen[i] && profile.values[i] > l_max) {
        profile.values[i] = len;
        ++assigned;
      }
    }
  }
  return profile;
}

bool PairComplexityTable::pair_above(std::uint32_t x, std::uint32_t y, int threshold) const {
  if (threshold > pair_l_max)
    throw InvariantViolation("pair_above: threshold " + std::to_string(threshold) +
                             " exceeds enumerated bound " + std::to_string(pair_l_max));
  return min_length(x, y) > threshold;
}

PairComplexityTable pair_complexity_table(int n, int s, int pair_l_max, int jobs, int hard_cap) {
  if (s < 1) throw std::invalid_argument("pair_complexity_table: requires s >= 1");
  if (n < 0 || n > 10) throw std::invalid_argument("pair_complexity_table: n out of [0, 10]");
  if (pair_l_max < 0 || pair_l_max > hard_cap)
    throw BudgetTooLarge("pair_complexity_table: pair_l_max exceeds cap");
  PairComplexityTable table;
  table.n = n;
  table.s = s;
  table.pair_l_max = pair_l_max;
  table.min_len.assign(static_cast<std::size_t>(1) << (2 * n), pair_l_max + 1);

  const int code_len = 3 * n + 2;  // |encode_pair| for two n-bit strings
  BitString empty;
  for (int len = 0; len <= pair_l_max; ++len) {
    RunBudget budget = budget_for(s, len, 0, code_len);
    const std::uint64_t total = 1ull << len;
    std::vector<std::uint8_t> seen(table.min_len.size(), 0);
    parallel_chunks(0, total, jobs, [&](std::uint64_t begin, std::uint64_t end, int) {
      Runner runner;
      std::vector<Instruction> code;
      std::vector<std::uint8_t> local(table.min_len.size(), 0);
      for (std::uint64_t value = begin; value < end; ++value) {
        decode_program_value(value, len, code);
        if (runner.run_code(code, empty.bits(), budget) != Outcome::Halted) continue;
        const auto& out = runner.output_scratch();
        if (static_cast<int>(out.size()) != code_len) continue;
        BitString z;
        z.bits() = out;
        try {
          auto [x, y] = decode_pair(z);
          if (x.size() != n || y.size() != n) continue;
          local[(x.value() << n) | y.value()] = 1;
        } catch (const MalformedPair&) {
          continue;
        }
      }
      static std::mutex merge_mutex;
      std::scoped_lock lock(merge_mutex);
      for (std::size_t i = 0; i < local.size(); ++i) seen[i] |= local[i];
    });
    for (std::size_t i = 0; i < seen.size(); ++i)
      if (seen[i] && table.min_len[i] > pair_l_max) table.min_len[i] = len;
  }
  return table;
}

void save_profile(std::ostream& out, const ComplexityProfile& p) {
  out << kMachineVersion << " n=" << p.n << " s=" << p.s << " lmax=" << p.l_max
      << " cond=" << to_len_hex(p.condition) << "\n";
  for (std::size_t v = 0; v < p.values.size(); ++v)
    out << to_hex(BitString::from_value(v, p.n)) << " " << p.values[v] << "\n";
}

ComplexityProfile load_profile(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw IoError("load_profile: missing header");
  std::istringstream hs(header);
  std::string version, ntok, stok, ltok, ctok;
  hs >> version >> ntok >> stok >> ltok >> ctok;
  if (version != kMachineVersion) throw IoError("load_profile: unknown machine version '" + version + "'");
  auto field = [](const std::string& tok, const char* key) -> std::string {
    std::string prefix = std::string(key) + "=";
    if (tok.rfind(prefix, 0) != 0) throw IoError("load_profile: expected '" + prefix + "...' token");
    return tok.substr(prefix.size());
  };
  ComplexityProfile p;
  p.n = std::stoi(field(ntok, "n"));
  p.s = std::stoi(field(stok, "s"));
  p.l_max = std::stoi(field(ltok, "lmax"));
  p.condition = from_len_hex(field(ctok, "cond"));
  p.values.assign(static_cast<std::size_t>(1) << p.n, p.l_max + 1);
  std::string hex;
  int value = 0;
  std::size_t rows = 0;
  while (in >> hex >> value) {
    BitString x = from_hex(hex, p.n);
    p.values[x.value()] = value;
    ++rows;
  }
  if (rows != p.values.size()) throw IoError("load_profile: expected " + std::to_string(p.values.size()) +
                                             " rows, found " + std::to_string(rows));
  p.validate();
  return p;
}

void save_profile_file(const std::string& path, const ComplexityProfile& p) {
  std::ofstream out(path);
  if (!out) throw IoError("save_profile_file: cannot open " + path);
  save_profile(out, p);
}

ComplexityProfile load_profile_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("load_profile_file: cannot open " + path);
  return load_profile(in);
}

ComplexityProfile cached_profile(const std::string& cache_dir, int n, const BitString& condition,
                                 int s, int l_max, int jobs) {
  if (cache_dir.empty()) return complexity_profile(n, condition, s, l_max, jobs);
  std::filesystem::create_directories(cache_dir);
  std::string name = std::string(kMachineVersion) + "_n" + std::to_string(n) + "_s" + std::to_string(s) +
                     "_l" + std::to_string(l_max) + "_c" + std::to_string(condition.size()) + "x" +
                     to_hex(condition) + ".profile";
  std::filesystem::path path = std::filesystem::path(cache_dir) / name;
  if (std::filesystem::exists(path)) {
    ComplexityProfile p = load_profile_file(path.string());
    if (p.n == n && p.condition == condition && p.s == s && p.l_max == l_max) return p;
  }
  ComplexityProfile p = complexity_profile(n, condition, s, l_max, jobs);
  save_profile_file(path.string(), p);
  return p;
}

}  // namespace kext
