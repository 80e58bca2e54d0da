// Command-line front end: analyze, fixed-modes, graph, crosscheck.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sfs/analysis.hpp"
#include "sfs/io.hpp"

namespace {

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write " << path << '\n';
    return false;
  }
  out << text;
  return static_cast<bool>(out);
}

void emit(const nlohmann::json& j, const std::string& text, const std::string& format) {
  if (format == "json")
    std::cout << j.dump(2) << '\n';
  else
    std::cout << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structurally fixed spectrum analysis of multi-channel linear systems"};
  app.require_subcommand(1);

  std::string path;
  std::string format = "text";
  std::string dot_path;
  sfs::AnalyzeOptions opts;
  std::vector<std::string> assignments;
  std::size_t oracle_samples = 1000;
  std::string out_path;

  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
  };

  auto* analyze = app.add_subcommand("analyze", "Classify the system and decide whether its fixed spectrum is structural");
  analyze->add_option("system", path, "System description (JSON)")->required();
  analyze->add_option("--seed", opts.seed, "Random seed");
  analyze->add_option("--trials", opts.trials, "Random evaluations per generic-rank or identity test")->check(CLI::PositiveNumber);
  analyze->add_option("--tol", opts.tol, "Relative rank tolerance for numeric pencils")->check(CLI::PositiveNumber);
  analyze->add_option("--budget", opts.budget, "Cycle-subgraph enumeration budget")->check(CLI::PositiveNumber);
  analyze->add_option("--dot", dot_path, "Also write the system graph (binary systems only)");
  add_format(analyze);

  auto* fixed = app.add_subcommand("fixed-modes", "Fixed spectrum at a parameter point, with a random-feedback cross-check");
  fixed->add_option("system", path, "System description (JSON)")->required();
  fixed->add_option("assignments", assignments, "Parameter values, name=num/den");
  fixed->add_option("--tol", opts.tol, "Relative rank tolerance")->check(CLI::PositiveNumber);
  fixed->add_option("--seed", opts.seed, "Random seed for the oracle");
  fixed->add_option("--samples", oracle_samples, "Random feedback samples")->check(CLI::PositiveNumber);
  add_format(fixed);

  auto* graph = app.add_subcommand("graph", "Export the colored system graph in DOT format");
  graph->add_option("system", path, "System description (JSON)")->required();
  graph->add_option("-o,--out,--dot", out_path, "Output file (default: stdout)");

  auto* cross = app.add_subcommand("crosscheck", "Compare the generic-rank and cycle-subgraph routes");
  cross->add_option("system", path, "System description (JSON)")->required();
  cross->add_option("--seed", opts.seed, "Random seed");
  cross->add_option("--trials", opts.trials, "Random evaluations for the generic rank")->check(CLI::PositiveNumber);
  cross->add_option("--budget", opts.budget, "Cycle-subgraph enumeration budget")->check(CLI::PositiveNumber);
  add_format(cross);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? sfs::kExitOk : sfs::kExitUsage;
  }

  try {
    const sfs::MultiChannelSystem sys = sfs::load_system(path);

    if (*analyze) {
      const sfs::Report report = sfs::analyze(sys, opts);
      if (!dot_path.empty()) {
        if (!report.classification.binary) {
          std::cerr << "error: --dot needs a binary linearly parameterized system\n";
          return sfs::kExitUsage;
        }
        if (!write_file(dot_path, sfs::graph_dot(sys))) return sfs::kExitUsage;
      }
      emit(sfs::to_json(report), sfs::to_text(report), format);
      const int code = sfs::exit_code(report);
      if (code == sfs::kExitBudget) std::cerr << "error: " << *report.theorem3_error << '\n';
      if (code == sfs::kExitInconsistent) std::cerr << "error: decision procedures disagree\n";
      return code;
    }

    if (*fixed) {
      const sfs::RationalPoint pt = sfs::parse_assignments(sys, assignments);
      const auto r = sfs::fixed_modes_at(sys, pt, opts.tol, oracle_samples, opts.seed);
      emit(sfs::to_json(r), sfs::to_text(r), format);
      return r.agree ? sfs::kExitOk : sfs::kExitInconsistent;
    }

    if (*graph) {
      const std::string dot = sfs::graph_dot(sys);
      if (out_path.empty()) {
        std::cout << dot;
        return sfs::kExitOk;
      }
      return write_file(out_path, dot) ? sfs::kExitOk : sfs::kExitUsage;
    }

    if (*cross) {
      const auto r = sfs::crosscheck(sys, opts.seed, opts.trials, opts.budget);
      emit(sfs::to_json(r), sfs::to_text(r), format);
      return r.agree ? sfs::kExitOk : sfs::kExitInconsistent;
    }
  } catch (const sfs::BudgetExhausted& e) {
    std::cerr << "error: " << e.what() << '\n';
    return sfs::kExitBudget;
  } catch (const sfs::SchemaError& e) {
    std::cerr << "error: " << path << ": " << e.what() << '\n';
    return sfs::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return sfs::kExitUsage;
  }
  return sfs::kExitUsage;
}
