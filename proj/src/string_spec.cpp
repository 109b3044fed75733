#include "cxdim/string_spec.hpp"

#include "cxdim/errors.hpp"
#include "cxdim/literal.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

namespace cxdim {
namespace {

constexpr double kInitiatorTolerance = 1e-12;
constexpr double kMergeTolerance = 1e-14;

std::string json_literal(const nlohmann::json& value, const char* field) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number()) return value.dump();
  throw Error(Errc::invalid_spec, std::string("field '") + field + "' must be a string or number");
}

int json_multiplicity(const nlohmann::json& item) {
  if (!item.contains("m")) return 1;
  const auto& m = item.at("m");
  if (!m.is_number_integer() || m.get<long long>() < 1)
    throw Error(Errc::invalid_spec, "multiplicity 'm' must be a positive integer");
  return m.get<int>();
}

}  // namespace

ScalingRatio ScalingRatio::from_value(const Quad& r, int multiplicity, std::string literal) {
  if (!(r > 0 && r < 1))
    throw Error(Errc::invalid_spec, "scaling ratio must lie in (0,1): " + quad_to_string(r));
  return {r, -boost::multiprecision::log(r), multiplicity, std::move(literal)};
}

ScalingRatio ScalingRatio::from_weight(const Quad& w, int multiplicity, std::string literal) {
  if (!(w > 0)) throw Error(Errc::invalid_spec, "ratio weight must be positive");
  return {boost::multiprecision::exp(-w), w, multiplicity, std::move(literal)};
}

SelfSimilarStringSpec::SelfSimilarStringSpec(Quad total_length, std::vector<ScalingRatio> ratios,
                                             std::vector<Gap> gaps, std::optional<LatticeForm> lattice,
                                             std::string length_literal)
    : total_length_(std::move(total_length)),
      length_literal_(std::move(length_literal)),
      gaps_(std::move(gaps)),
      lattice_(std::move(lattice)) {
  if (!(total_length_ > 0)) throw Error(Errc::invalid_spec, "total length L must be positive");
  for (const auto& r : ratios) {
    if (r.multiplicity < 1) throw Error(Errc::invalid_spec, "ratio multiplicity must be >= 1");
    if (!(r.value > 0 && r.value < 1)) throw Error(Errc::invalid_spec, "scaling ratio must lie in (0,1)");
  }
  for (const auto& g : gaps_) {
    if (g.multiplicity < 1) throw Error(Errc::invalid_spec, "gap multiplicity must be >= 1");
    if (!(g.value > 0 && g.value < 1)) throw Error(Errc::invalid_spec, "gap must lie in (0,1)");
  }

  std::sort(ratios.begin(), ratios.end(),
            [](const ScalingRatio& a, const ScalingRatio& b) { return a.weight < b.weight; });
  for (auto& r : ratios) {
    if (!ratios_.empty()) {
      auto& last = ratios_.back();
      if (abs(r.weight - last.weight) <= kMergeTolerance * (r.weight > last.weight ? r.weight : last.weight)) {
        last.multiplicity += r.multiplicity;
        continue;
      }
    }
    ratios_.push_back(std::move(r));
  }

  if (scaling_count() < 2) throw Error(Errc::invalid_spec, "need N >= 2 scaling ratios");
  if (gap_count() < 1) throw Error(Errc::invalid_spec, "need K >= 1 gaps");

  Quad total = 0;
  for (const auto& r : ratios_) total += r.value * r.multiplicity;
  for (const auto& g : gaps_) total += g.value * g.multiplicity;
  if (abs(total - 1) > kInitiatorTolerance)
    throw Error(Errc::invalid_spec,
                "initiator identity violated: sum of ratios and gaps is " + quad_to_string(total));
}

SelfSimilarStringSpec SelfSimilarStringSpec::from_literals(
    const std::string& total_length, const std::vector<std::pair<std::string, int>>& ratios,
    const std::vector<std::pair<std::string, int>>& gaps) {
  std::vector<ScalingRatio> rs;
  for (const auto& [text, m] : ratios) rs.push_back(ScalingRatio::from_value(parse_literal(text), m, text));
  std::vector<Gap> gs;
  for (const auto& [text, m] : gaps) gs.push_back({parse_literal(text), m, text});
  return SelfSimilarStringSpec(parse_literal(total_length), std::move(rs), std::move(gs), std::nullopt,
                               total_length);
}

SelfSimilarStringSpec SelfSimilarStringSpec::from_lattice(const std::string& total_length,
                                                          const std::string& base,
                                                          const std::vector<std::pair<int, int>>& exponents,
                                                          const std::vector<std::pair<std::string, int>>& gaps) {
  const Quad r = parse_literal(base);
  if (!(r > 0 && r < 1)) throw Error(Errc::invalid_spec, "lattice base must lie in (0,1)");
  LatticeForm form{r, -boost::multiprecision::log(r), base, {}};
  std::vector<ScalingRatio> rs;
  for (const auto& [k, m] : exponents) {
    if (k < 1) throw Error(Errc::invalid_spec, "lattice exponents must be positive integers");
    rs.push_back(ScalingRatio::from_weight(form.base_weight * k, m));
    form.exponents.emplace_back(k, m);
  }
  std::sort(form.exponents.begin(), form.exponents.end());
  std::vector<std::pair<int, int>> merged;
  for (const auto& e : form.exponents) {
    if (!merged.empty() && merged.back().first == e.first) merged.back().second += e.second;
    else merged.push_back(e);
  }
  form.exponents = std::move(merged);
  std::vector<Gap> gs;
  for (const auto& [text, m] : gaps) gs.push_back({parse_literal(text), m, text});
  return SelfSimilarStringSpec(parse_literal(total_length), std::move(rs), std::move(gs), std::move(form),
                               total_length);
}

int SelfSimilarStringSpec::scaling_count() const {
  int n = 0;
  for (const auto& r : ratios_) n += r.multiplicity;
  return n;
}

int SelfSimilarStringSpec::gap_count() const {
  int k = 0;
  for (const auto& g : gaps_) k += g.multiplicity;
  return k;
}

std::vector<double> SelfSimilarStringSpec::expanded_ratios() const {
  std::vector<double> out;
  for (const auto& r : ratios_) out.insert(out.end(), static_cast<std::size_t>(r.multiplicity), r.r());
  return out;
}

std::vector<double> SelfSimilarStringSpec::expanded_gaps() const {
  std::vector<double> out;
  for (const auto& g : gaps_) out.insert(out.end(), static_cast<std::size_t>(g.multiplicity), g.g());
  return out;
}

double SelfSimilarStringSpec::largest_gap() const {
  double best = 0;
  for (const auto& g : gaps_) best = std::max(best, g.g());
  return best;
}

double SelfSimilarStringSpec::gap_sum() const {
  Quad s = 0;
  for (const auto& g : gaps_) s += g.value * g.multiplicity;
  return static_cast<double>(s);
}

SelfSimilarStringSpec SelfSimilarStringSpec::scaled(const Quad& lambda) const {
  SelfSimilarStringSpec copy = *this;
  copy.total_length_ = total_length_ * lambda;
  copy.length_literal_.clear();
  return copy;
}

SelfSimilarStringSpec spec_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw Error(Errc::invalid_spec, "spec document must be a JSON object");
  if (!doc.contains("L")) throw Error(Errc::invalid_spec, "missing field 'L'");
  if (!doc.contains("gaps") || !doc.at("gaps").is_array())
    throw Error(Errc::invalid_spec, "missing array field 'gaps'");

  std::vector<std::pair<std::string, int>> gaps;
  for (const auto& item : doc.at("gaps")) {
    if (!item.is_object() || !item.contains("g")) throw Error(Errc::invalid_spec, "gap entries need 'g'");
    gaps.emplace_back(json_literal(item.at("g"), "g"), json_multiplicity(item));
  }
  const std::string length = json_literal(doc.at("L"), "L");

  if (doc.contains("lattice")) {
    const auto& lat = doc.at("lattice");
    if (!lat.is_object() || !lat.contains("r") || !lat.contains("exponents"))
      throw Error(Errc::invalid_spec, "'lattice' needs 'r' and 'exponents'");
    std::vector<std::pair<int, int>> exps;
    for (const auto& e : lat.at("exponents")) {
      if (e.is_number_integer()) {
        exps.emplace_back(e.get<int>(), 1);
      } else if (e.is_object() && e.contains("k") && e.at("k").is_number_integer()) {
        exps.emplace_back(e.at("k").get<int>(), json_multiplicity(e));
      } else {
        throw Error(Errc::invalid_spec, "lattice exponents must be integers or {k, m} objects");
      }
    }
    return SelfSimilarStringSpec::from_lattice(length, json_literal(lat.at("r"), "r"), exps, gaps);
  }

  if (!doc.contains("ratios") || !doc.at("ratios").is_array())
    throw Error(Errc::invalid_spec, "missing array field 'ratios'");
  std::vector<std::pair<std::string, int>> ratios;
  for (const auto& item : doc.at("ratios")) {
    if (!item.is_object() || !item.contains("r")) throw Error(Errc::invalid_spec, "ratio entries need 'r'");
    ratios.emplace_back(json_literal(item.at("r"), "r"), json_multiplicity(item));
  }
  return SelfSimilarStringSpec::from_literals(length, ratios, gaps);
}

nlohmann::json spec_to_json(const SelfSimilarStringSpec& spec) {
  nlohmann::json doc;
  doc["L"] = spec.length_literal().empty() ? quad_to_string(spec.total_length_q()) : spec.length_literal();
  if (const auto& lat = spec.lattice_form()) {
    nlohmann::json exps = nlohmann::json::array();
    for (const auto& [k, m] : lat->exponents) exps.push_back({{"k", k}, {"m", m}});
    doc["lattice"] = {{"r", lat->base_literal.empty() ? quad_to_string(lat->base) : lat->base_literal},
                      {"exponents", exps}};
  } else {
    nlohmann::json rs = nlohmann::json::array();
    for (const auto& r : spec.ratios())
      rs.push_back({{"r", r.literal.empty() ? quad_to_string(r.value) : r.literal}, {"m", r.multiplicity}});
    doc["ratios"] = rs;
  }
  nlohmann::json gs = nlohmann::json::array();
  for (const auto& g : spec.gaps())
    gs.push_back({{"g", g.literal.empty() ? quad_to_string(g.value) : g.literal}, {"m", g.multiplicity}});
  doc["gaps"] = gs;
  return doc;
}

SelfSimilarStringSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::io_error, "cannot open spec file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::parse_error, path.string() + ": " + e.what());
  }
  return spec_from_json(doc);
}

}  // namespace cxdim
