#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace kext {

/// A combinatorial design over the seed ground set [0, ground_size): sets of
/// exactly set_size indices with pairwise intersections <= intersection_bound.
struct Design {
  int ground_size = 0;
  int set_size = 0;
  int intersection_bound = 0;
  std::vector<std::vector<int>> sets;  // each sorted ascending

  void validate() const;
  /// Brute-force pairwise intersection audit; throws InvariantViolation.
  void audit_intersections() const;
};

/// Polynomial design over the prime field Z_q: ground set [0, q^2) with index
/// (a, v) -> a*q + v; one set per polynomial of degree < d, S_p = {a*q +
/// p(a) mod q}. Sets are ordered by the coefficient vector (constant term
/// first) read as a base-q number, ascending. q^d sets of size q with
/// pairwise intersections <= d-1.
Design poly_design(int q, int d);

/// Greedy design: scans t-subsets of [0, l) in lexicographic order, keeping
/// each subset that intersects every kept set in <= rho indices, until n_sets
/// are kept. Throws DesignInfeasible if the scan exhausts all subsets first.
Design greedy_design(int l, int t, int rho, int n_sets);

// Design file format: header "design-v1 l=<int> t=<int> rho=<int> n=<int>",
// then one line of space-separated indices per set.
void save_design(std::ostream& out, const Design& d);
Design load_design(std::istream& in);
void save_design_file(const std::string& path, const Design& d);
Design load_design_file(const std::string& path);

}  // namespace kext
