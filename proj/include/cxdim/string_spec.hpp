#pragma once

#include "cxdim/numeric.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cxdim {

/// One distinct scaling ratio r with its multiplicity. The weight
/// log(1/r) is kept in float128 because root finding at large imaginary
/// parts multiplies it by |Im s|.
struct ScalingRatio {
  Quad value{0};
  Quad weight{0};
  int multiplicity = 1;
  std::string literal;

  double r() const { return static_cast<double>(value); }
  double w() const { return static_cast<double>(weight); }

  static ScalingRatio from_value(const Quad& r, int multiplicity, std::string literal = {});
  static ScalingRatio from_weight(const Quad& w, int multiplicity, std::string literal = {});
};

struct Gap {
  Quad value{0};
  int multiplicity = 1;
  std::string literal;

  double g() const { return static_cast<double>(value); }
};

/// Present when the string was given as (base r, integer exponents k_j); the
/// lattice structure is then known exactly and detection is bypassed.
struct LatticeForm {
  Quad base{0};
  Quad base_weight{0};
  std::string base_literal;
  std::vector<std::pair<int, int>> exponents;  // (k_j, multiplicity)
};

/// Initiator of a self-similar string: total length L, scaling ratios and
/// gaps with r_1 + ... + r_N + g_1 + ... + g_K = 1.
///
/// Ratios are merged (equal weights within 1e-14 relative) and sorted with the
/// largest ratio first. Gaps keep their input order because the prefractal
/// layout interleaves them with the scaled copies.
class SelfSimilarStringSpec {
 public:
  SelfSimilarStringSpec(Quad total_length, std::vector<ScalingRatio> ratios, std::vector<Gap> gaps,
                        std::optional<LatticeForm> lattice = std::nullopt, std::string length_literal = {});

  /// Builds a spec from textual literals (see parse_literal).
  static SelfSimilarStringSpec from_literals(const std::string& total_length,
                                             const std::vector<std::pair<std::string, int>>& ratios,
                                             const std::vector<std::pair<std::string, int>>& gaps);

  /// Lattice input: ratios r^{k_j} with multiplicities.
  static SelfSimilarStringSpec from_lattice(const std::string& total_length, const std::string& base,
                                            const std::vector<std::pair<int, int>>& exponents,
                                            const std::vector<std::pair<std::string, int>>& gaps);

  double total_length() const { return static_cast<double>(total_length_); }
  const Quad& total_length_q() const { return total_length_; }
  const std::string& length_literal() const { return length_literal_; }

  std::span<const ScalingRatio> ratios() const { return ratios_; }
  std::span<const Gap> gaps() const { return gaps_; }
  const std::optional<LatticeForm>& lattice_form() const { return lattice_; }

  /// N, counted with multiplicity.
  int scaling_count() const;
  /// K, counted with multiplicity.
  int gap_count() const;
  /// M = number of distinct ratios.
  int distinct_ratio_count() const { return static_cast<int>(ratios_.size()); }

  std::vector<double> expanded_ratios() const;
  std::vector<double> expanded_gaps() const;
  double largest_gap() const;
  double gap_sum() const;

  /// Same initiator in an interval of length lambda * L.
  SelfSimilarStringSpec scaled(const Quad& lambda) const;

 private:
  Quad total_length_;
  std::string length_literal_;
  std::vector<ScalingRatio> ratios_;
  std::vector<Gap> gaps_;
  std::optional<LatticeForm> lattice_;
};

SelfSimilarStringSpec spec_from_json(const nlohmann::json& doc);
nlohmann::json spec_to_json(const SelfSimilarStringSpec& spec);
SelfSimilarStringSpec load_spec(const std::filesystem::path& path);

}  // namespace cxdim
