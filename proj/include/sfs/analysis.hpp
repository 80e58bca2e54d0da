#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sfs/fixedmodes.hpp"
#include "sfs/graph.hpp"
#include "sfs/structural.hpp"
#include "sfs/system.hpp"

namespace sfs {

/// Process exit codes shared by every subcommand.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitInconsistent = 2, kExitBudget = 3 };

inline constexpr int kReportSchemaVersion = 1;

struct AnalyzeOptions {
  std::uint64_t seed = 0;
  std::size_t trials = kDefaultTrials;
  double tol = kDefaultRankTol;
  double cluster_radius = kDefaultClusterRadius;
  std::size_t budget = kDefaultBudget;
  /// Nonzero integer points in [-spectrum_bound, spectrum_bound] at which the numeric
  /// fixed spectrum is reported.
  std::size_t spectrum_points = 3;
  std::int64_t spectrum_bound = 50;
  friend bool operator==(const AnalyzeOptions&, const AnalyzeOptions&) = default;
};

struct Classification {
  bool polynomial = true;
  bool linear = false;
  bool binary = false;
  bool unitary = false;
  std::optional<std::string> nonlinear_reason;
  friend bool operator==(const Classification&, const Classification&) = default;
};

struct SpectrumAtPoint {
  std::map<std::string, std::string> point;  // parameter name -> "num/den"
  FixedSpectrumResult spectrum;
};

struct Report {
  AnalyzeOptions options;
  std::size_t n = 0, k = 0, q = 0, m = 0, l = 0;
  Classification classification;
  StructuralVerdict theorem1;
  std::optional<StructuralVerdict> theorem2;  // iff linear
  std::optional<StructuralVerdict> theorem3;  // iff binary and enumeration completed
  std::optional<std::string> theorem3_error;  // iff binary and the budget was exhausted
  std::vector<SpectrumAtPoint> spectra;
  bool consistent = true;
  std::vector<std::string> disagreements;
  std::vector<std::string> warnings;
};

Classification classify(const MultiChannelSystem& sys);

/// Runs every applicable decision procedure and cross-checks the verdicts.
Report analyze(const MultiChannelSystem& sys, const AnalyzeOptions& opts = {});

/// Exit status for a finished analysis.
int exit_code(const Report& r);

nlohmann::json to_json(const Report& r);
Report report_from_json(const nlohmann::json& j);
std::string to_text(const Report& r);

/// Parses "name=value" assignments (value "num/den" or "num").
/// Throws std::invalid_argument naming every unassigned parameter.
RationalPoint parse_assignments(const MultiChannelSystem& sys, const std::vector<std::string>& assignments);

struct FixedModesReport {
  std::map<std::string, std::string> point;
  FixedSpectrumResult pencil;
  std::vector<Complex> oracle;
  std::size_t oracle_samples = 0;
  std::uint64_t seed = 0;
  bool agree = false;
};

FixedModesReport fixed_modes_at(const MultiChannelSystem& sys, const RationalPoint& pt, double tol,
                                std::size_t oracle_samples, std::uint64_t seed,
                                double cluster_radius = kDefaultClusterRadius);
nlohmann::json to_json(const FixedModesReport& r);
std::string to_text(const FixedModesReport& r);

struct CrosscheckReport {
  std::size_t n = 0;
  std::size_t closed_loop_grank = 0;
  bool rank_deficient = false;  // algebraic route
  std::size_t cycle_subgraphs = 0;
  std::size_t similarity_classes = 0;
  std::size_t unbalanced_classes = 0;
  bool no_unbalanced_class = false;  // graph route
  bool agree = false;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::size_t budget = 0;
};

/// Compares grank(A + B F C) < n against the absence of an unbalanced class.
/// Requires a binary system (std::invalid_argument otherwise); propagates
/// BudgetExhausted.
CrosscheckReport crosscheck(const MultiChannelSystem& sys, std::uint64_t seed, std::size_t trials,
                            std::size_t budget);
nlohmann::json to_json(const CrosscheckReport& r);
std::string to_text(const CrosscheckReport& r);

/// DOT text of the system graph. Throws std::invalid_argument for non-binary
/// systems, with the reason.
std::string graph_dot(const MultiChannelSystem& sys);

/// "a+bi" formatting with fixed precision and -0 folded to 0.
std::string format_complex(const Complex& z);

}  // namespace sfs
