// Prints the golden values the unit tests freeze. Run once against the
// shipped rule base; its output lives in tests/golden/.
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "mamdani_oracle.hpp"
#include "shuffle_oracle.hpp"

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: oracle_dump RULEBASE.json\n";
    return 64;
  }
  std::ifstream in(argv[1]);
  const oracle::Mamdani m(nlohmann::json::parse(in));
  nlohmann::json out;

  for (int g = 1; g <= 6; ++g) {
    const auto d = oracle::intent_delta(m, g, 0.0);
    out["origin"].push_back({{"grade", g}, {"d_pl", d.d_pl}, {"d_ar", d.d_ar}});
  }
  for (double ar : {-190.0, -120.0, 35.0, 160.0}) {
    for (int g = 1; g <= 6; ++g) {
      const auto d = oracle::intent_delta(m, g, ar);
      out["rows"].push_back({{"grade", g}, {"arousal", ar}, {"d_pl", d.d_pl}, {"d_ar", d.d_ar}});
    }
  }
  double pl = 0.0;
  double ar = -150.0;
  for (int k = 0; k < 10; ++k) {
    const auto d = oracle::intent_delta(m, 6, ar);
    pl = std::clamp(pl + d.d_pl, -200.0, 200.0);
    ar = std::clamp(ar + d.d_ar, -200.0, 200.0);
    out["replay"].push_back({{"x_pl", pl}, {"x_ar", ar}});
  }
  out["seed42_order"] = oracle::shuffled_grid(42);
  std::cout << out.dump(2) << '\n';
  return 0;
}
