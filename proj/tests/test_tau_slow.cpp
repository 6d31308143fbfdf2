#include <doctest.h>

#include "mg1/tau.hpp"

using namespace mg1;

TEST_CASE("exhaustive tau properties up to length 8 on five symbols") {
  for (const auto& row : tau_exhaustive_check(8, 4)) {
    INFO(row.property);
    CHECK(row.checked > 0);
    CHECK(row.violations == 0);
  }
}
