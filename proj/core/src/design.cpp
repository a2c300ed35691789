#include "kext/design.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "kext/errors.hpp"

namespace kext {

void Design::validate() const {
  if (ground_size < 1) throw InvariantViolation("Design: empty ground set");
  if (set_size < 1 || set_size > ground_size) throw InvariantViolation("Design: bad set size");
  for (const auto& set : sets) {
    if (static_cast<int>(set.size()) != set_size)
      throw InvariantViolation("Design: set of wrong size");
    if (!std::is_sorted(set.begin(), set.end()))
      throw InvariantViolation("Design: set not sorted");
    if (std::adjacent_find(set.begin(), set.end()) != set.end())
      throw InvariantViolation("Design: duplicate index in set");
    if (set.front() < 0 || set.back() >= ground_size)
      throw InvariantViolation("Design: index outside ground set");
  }
}

namespace {

int intersection_size(const std::vector<int>& a, const std::vector<int>& b) {
  int count = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib)
      ++ia;
    else if (*ib < *ia)
      ++ib;
    else
      ++count, ++ia, ++ib;
  }
  return count;
}

bool is_prime(int q) {
  if (q < 2) return false;
  for (int f = 2; static_cast<long long>(f) * f <= q; ++f)
    if (q % f == 0) return false;
  return true;
}

}  // namespace

void Design::audit_intersections() const {
  validate();
  for (std::size_t i = 0; i < sets.size(); ++i)
    for (std::size_t j = i + 1; j < sets.size(); ++j) {
      int isz = intersection_size(sets[i], sets[j]);
      if (isz > intersection_bound)
        throw InvariantViolation("Design: sets " + std::to_string(i) + " and " + std::to_string(j) +
                                 " intersect in " + std::to_string(isz) + " > " +
                                 std::to_string(intersection_bound));
    }
}

Design poly_design(int q, int d) {
  if (!is_prime(q)) throw NotPrime("poly_design: q = " + std::to_string(q) + " is not prime");
  if (d < 1) throw DegreeTooLarge("poly_design: d must be >= 1");
  if (d > q) throw DegreeTooLarge("poly_design: d > q would collide polynomials as functions");
  long long n_sets = 1;
  for (int i = 0; i < d; ++i) {
    n_sets *= q;
    if (n_sets > (1 << 22)) throw DegreeTooLarge("poly_design: q^d too large");
  }
  Design design;
  design.ground_size = q * q;
  design.set_size = q;
  design.intersection_bound = d - 1;
  design.sets.reserve(static_cast<std::size_t>(n_sets));
  std::vector<int> coeff(static_cast<std::size_t>(d), 0);  // coeff[j] multiplies x^j
  for (long long index = 0; index < n_sets; ++index) {
    // Coefficient vector (constant term first) read as a base-q number, so
    // the constant term is the most significant digit.
    long long rest = index;
    long long place = n_sets / q;  // q^(d-1)
    for (int j = 0; j < d; ++j) {
      coeff[static_cast<std::size_t>(j)] = static_cast<int>(rest / place);
      rest %= place;
      if (j + 1 < d) place /= q;
    }
    std::vector<int> set;
    set.reserve(static_cast<std::size_t>(q));
    for (int a = 0; a < q; ++a) {
      long long v = 0;
      for (int j = d - 1; j >= 0; --j) v = (v * a + coeff[static_cast<std::size_t>(j)]) % q;
      set.push_back(a * q + static_cast<int>(v));
    }
    design.sets.push_back(std::move(set));
  }
  design.validate();
  return design;
}

Design greedy_design(int l, int t, int rho, int n_sets) {
  if (t < 1 || t > l) throw DesignInfeasible("greedy_design: need 1 <= t <= l");
  if (n_sets < 1) throw DesignInfeasible("greedy_design: need n_sets >= 1");
  Design design;
  design.ground_size = l;
  design.set_size = t;
  design.intersection_bound = rho;

  std::vector<int> subset(static_cast<std::size_t>(t));
  for (int i = 0; i < t; ++i) subset[static_cast<std::size_t>(i)] = i;
  while (true) {
    bool compatible = true;
    for (const auto& kept : design.sets) {
      if (intersection_size(subset, kept) > rho) {
        compatible = false;
        break;
      }
    }
    if (compatible) {
      design.sets.push_back(subset);
      if (static_cast<int>(design.sets.size()) == n_sets) return design;
    }
    // next lexicographic t-combination of [0, l)
    int i = t - 1;
    while (i >= 0 && subset[static_cast<std::size_t>(i)] == l - t + i) --i;
    if (i < 0) break;
    ++subset[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < t; ++j)
      subset[static_cast<std::size_t>(j)] = subset[static_cast<std::size_t>(j - 1)] + 1;
  }
  throw DesignInfeasible("greedy_design: exhausted all " + std::to_string(l) + "-choose-" +
                         std::to_string(t) + " subsets with only " +
                         std::to_string(design.sets.size()) + " of " + std::to_string(n_sets) +
                         " sets kept");
}

void save_design(std::ostream& out, const Design& d) {
  out << "design-v1 l=" << d.ground_size << " t=" << d.set_size << " rho=" << d.intersection_bound
      << " n=" << d.sets.size() << "\n";
  for (const auto& set : d.sets) {
    for (std::size_t i = 0; i < set.size(); ++i) out << (i ? " " : "") << set[i];
    out << "\n";
  }
}

Design load_design(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw IoError("load_design: missing header");
  int l = 0, t = 0, rho = 0;
  long long n = 0;
  if (std::sscanf(header.c_str(), "design-v1 l=%d t=%d rho=%d n=%lld", &l, &t, &rho, &n) != 4)
    throw IoError("load_design: bad header '" + header + "'");
  Design d;
  d.ground_size = l;
  d.set_size = t;
  d.intersection_bound = rho;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::vector<int> set;
    int idx = 0;
    while (ls >> idx) set.push_back(idx);
    d.sets.push_back(std::move(set));
  }
  if (static_cast<long long>(d.sets.size()) != n)
    throw IoError("load_design: header announces " + std::to_string(n) + " sets, file has " +
                  std::to_string(d.sets.size()));
  d.validate();
  return d;
}

void save_design_file(const std::string& path, const Design& d) {
  std::ofstream out(path);
  if (!out) throw IoError("save_design_file: cannot open " + path);
  save_design(out, d);
}

Design load_design_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("load_design_file: cannot open " + path);
  return load_design(in);
}

}  // namespace kext
