#include "cxdim/cli/builtins.hpp"

#include "cxdim/errors.hpp"

namespace cxdim::cli {

const std::vector<std::pair<std::string, nlohmann::json>>& builtin_specs() {
  using nlohmann::json;
  static const std::vector<std::pair<std::string, json>> specs = {
      {"cantor", json{{"L", "3"}, {"ratios", {{{"r", "1/3"}, {"m", 2}}}}, {"gaps", {{{"g", "1/3"}, {"m", 1}}}}}},
      {"modified-cantor",
       json{{"L", "3"},
            {"ratios", {{{"r", "1/9"}, {"m", 3}}, {{"r", "1/27"}, {"m", 2}}}},
            {"gaps", {{{"g", "1/9"}, {"m", 1}}, {{"g", "1/3"}, {"m", 1}}, {{"g", "1/9"}, {"m", 1}}, {{"g", "1/27"}, {"m", 1}}}}}},
      {"multiple",
       json{{"L", "3"},
            {"ratios", {{{"r", "1/9"}, {"m", 3}}, {{"r", "1/27"}, {"m", 2}}}},
            {"gaps", {{{"g", "1/3+2/9+1/27"}, {"m", 1}}}}}},
      {"fibonacci",
       json{{"L", "4"},
            {"ratios", {{{"r", "1/2"}, {"m", 1}}, {{"r", "1/4"}, {"m", 1}}}},
            {"gaps", {{{"g", "1/4"}, {"m", 1}}}}}},
      {"modified-fibonacci",
       json{{"L", "4"},
            {"ratios", {{{"r", "1/4"}, {"m", 2}}, {{"r", "1/8"}, {"m", 1}}}},
            {"gaps", {{{"g", "1/4"}, {"m", 1}}, {{"g", "1/8"}, {"m", 1}}}}}},
      {"nongeneric",
       json{{"L", "1"},
            {"ratios", {{{"r", "1/2"}, {"m", 1}}, {{"r", "1/4"}, {"m", 1}}, {{"r", "2^(-1-sqrt(2))"}, {"m", 1}}}},
            {"gaps", {{{"g", "1/4-2^(-1-sqrt(2))"}, {"m", 1}}}}}},
      {"generic-pair",
       json{{"L", "1"},
            {"ratios", {{{"r", "1/2"}, {"m", 1}}, {{"r", "2^(-1-sqrt(2))"}, {"m", 1}}}},
            {"gaps", {{{"g", "1/2-2^(-1-sqrt(2))"}, {"m", 1}}}}}},
      {"generic-quarter",
       json{{"L", "1"},
            {"ratios", {{{"r", "1/4"}, {"m", 1}}, {{"r", "2^(-1-sqrt(2))"}, {"m", 1}}}},
            {"gaps", {{{"g", "3/4-2^(-1-sqrt(2))"}, {"m", 1}}}}}},
  };
  return specs;
}

SelfSimilarStringSpec builtin_spec(const std::string& name) {
  for (const auto& [n, doc] : builtin_specs())
    if (n == name) return spec_from_json(doc);
  throw Error(Errc::invalid_spec, "unknown builtin spec '" + name + "'");
}

}  // namespace cxdim::cli
