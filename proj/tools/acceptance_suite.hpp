#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace cts::acceptance {

struct Criterion {
  int number = 0;
  std::string title;
  std::function<bool(std::string& detail)> run;
};

const std::vector<Criterion>& criteria();

// One line per criterion; returns the number of failures.
int run_all(std::ostream& out);

}  // namespace cts::acceptance
