#pragma once

#include <iosfwd>
#include <set>
#include <string>
#include <vector>

namespace cyclevol::acceptance {

struct Criterion {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string measured;
  std::string expected;
  double seconds = 0;
};

struct Options {
  unsigned seed = 20240601;
  /// Empty means every criterion.
  std::set<int> only;
};

std::vector<Criterion> run(const Options& options = {});

/// One line per criterion: PASS/FAIL, id, title, measured vs expected, wall time.
void print(std::ostream& out, const Criterion& c);

}  // namespace cyclevol::acceptance
