#include "sfs/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <sstream>

namespace sfs {

using nlohmann::json;

namespace {

std::vector<std::string> names_of(const MultiChannelSystem& sys) {
  std::vector<std::string> names = sys.param_names();
  if (names.empty())
    for (std::size_t i = 0; i < sys.q(); ++i) names.push_back("p" + std::to_string(i + 1));
  return names;
}

double fold_zero(double x) { return x == 0.0 ? 0.0 : x; }

json subset_json(const ChannelSubset& s) {
  json a = json::array();
  for (auto i : s.members()) a.push_back(i + 1);
  return a;
}

ChannelSubset subset_from(const json& a, std::size_t k) {
  std::vector<std::size_t> v;
  for (const auto& x : a) v.push_back(x.get<std::size_t>() - 1);
  return ChannelSubset(v, k);
}

std::optional<DecisionRoute> route_from(const std::string& s) {
  for (auto r : {DecisionRoute::kTheorem1, DecisionRoute::kTheorem2, DecisionRoute::kTheorem3})
    if (to_string(r) == s) return r;
  return std::nullopt;
}

std::optional<SfsReason> reason_from(const std::string& s) {
  for (auto r : {SfsReason::kGenericRankDeficient, SfsReason::kProperSubspace, SfsReason::kPencilDropAllP})
    if (to_string(r) == s) return r;
  return std::nullopt;
}

json verdict_json(const StructuralVerdict& v) {
  json d;
  d["seed"] = v.diagnostics.seed;
  d["trials"] = v.diagnostics.trials;
  d["sampled_points"] = v.diagnostics.sampled_points;
  d["subsets"] = json::array();
  for (const auto& t : v.diagnostics.subsets) {
    json tj;
    tj["subset"] = subset_json(t.subset);
    tj["discarded"] = t.discarded;
    tj["certificate_sample"] = t.certificate_sample ? json(*t.certificate_sample) : json(nullptr);
    tj["samples_tried"] = t.samples_tried;
    d["subsets"].push_back(tj);
  }
  d["notes"] = v.diagnostics.notes;
  d["error_mode"] = v.diagnostics.error_mode;
  json j;
  j["has_sfs"] = v.has_sfs;
  j["route"] = to_string(v.route);
  j["witness"] = v.witness ? subset_json(*v.witness) : json(nullptr);
  j["reason"] = v.reason ? json(to_string(*v.reason)) : json(nullptr);
  j["diagnostics"] = d;
  return j;
}

StructuralVerdict verdict_from(const json& j, std::size_t k) {
  StructuralVerdict v;
  v.has_sfs = j.at("has_sfs").get<bool>();
  const auto route = route_from(j.at("route").get<std::string>());
  if (!route) throw std::invalid_argument("report: unknown route");
  v.route = *route;
  if (!j.at("witness").is_null()) v.witness = subset_from(j.at("witness"), k);
  if (!j.at("reason").is_null()) {
    v.reason = reason_from(j.at("reason").get<std::string>());
    if (!v.reason) throw std::invalid_argument("report: unknown reason");
  }
  const json& d = j.at("diagnostics");
  v.diagnostics.seed = d.at("seed").get<std::uint64_t>();
  v.diagnostics.trials = d.at("trials").get<std::size_t>();
  v.diagnostics.sampled_points = d.at("sampled_points").get<std::vector<std::vector<std::int64_t>>>();
  for (const auto& tj : d.at("subsets")) {
    SubsetTrace t{subset_from(tj.at("subset"), k), false, std::nullopt, 0};
    t.discarded = tj.at("discarded").get<bool>();
    if (!tj.at("certificate_sample").is_null()) t.certificate_sample = tj.at("certificate_sample").get<std::size_t>();
    t.samples_tried = tj.at("samples_tried").get<std::size_t>();
    v.diagnostics.subsets.push_back(std::move(t));
  }
  v.diagnostics.notes = d.at("notes").get<std::vector<std::string>>();
  v.diagnostics.error_mode = d.at("error_mode").get<std::string>();
  return v;
}

json spectrum_json(const FixedSpectrumResult& s) {
  json j;
  j["tol"] = s.tol;
  j["cluster_radius"] = s.cluster_radius;
  j["eigenvalues"] = json::array();
  for (const auto& e : s.eigenvalues) {
    json w = json::array();
    for (const auto& s2 : e.witnesses) w.push_back(subset_json(s2));
    j["eigenvalues"].push_back({{"re", fold_zero(e.value.real())}, {"im", fold_zero(e.value.imag())}, {"witnesses", w}});
  }
  return j;
}

FixedSpectrumResult spectrum_from(const json& j, std::size_t k) {
  FixedSpectrumResult s;
  s.tol = j.at("tol").get<double>();
  s.cluster_radius = j.at("cluster_radius").get<double>();
  for (const auto& e : j.at("eigenvalues")) {
    FixedEigenvalue fe{Complex(e.at("re").get<double>(), e.at("im").get<double>()), {}};
    for (const auto& w : e.at("witnesses")) fe.witnesses.push_back(subset_from(w, k));
    s.eigenvalues.push_back(std::move(fe));
  }
  return s;
}

std::vector<Complex> values_of(const FixedSpectrumResult& s) {
  std::vector<Complex> out;
  for (const auto& e : s.eigenvalues) out.push_back(e.value);
  return out;
}

std::string verdict_text(const char* name, const StructuralVerdict& v) {
  std::ostringstream os;
  os << name << ": has_sfs=" << (v.has_sfs ? "true" : "false");
  if (v.reason) os << " reason=" << to_string(*v.reason);
  if (v.witness) os << " witness=" << v.witness->to_string();
  os << '\n';
  for (const auto& note : v.diagnostics.notes) os << "  " << note << '\n';
  return os.str();
}

}  // namespace

std::string format_complex(const Complex& z) {
  char buf[96];
  const double re = fold_zero(std::abs(z.real()) < 5e-13 ? 0.0 : z.real());
  const double im = fold_zero(std::abs(z.imag()) < 5e-13 ? 0.0 : z.imag());
  if (im == 0.0)
    std::snprintf(buf, sizeof buf, "%.10g", re);
  else
    std::snprintf(buf, sizeof buf, "%.10g%+.10gi", re, im);
  return buf;
}

Classification classify(const MultiChannelSystem& sys) {
  Classification c;
  c.polynomial = is_polynomially_parameterized(sys);
  const auto lin = detect_linear_parameterization(sys);
  if (const auto* d = std::get_if<LinearParamDecomposition>(&lin)) {
    c.linear = true;
    c.binary = d->is_binary;
    c.unitary = d->is_unitary;
  } else {
    const auto& nl = std::get<NotLinear>(lin);
    c.nonlinear_reason = to_string(nl.reason) + ": " + nl.detail;
  }
  return c;
}

Report analyze(const MultiChannelSystem& sys, const AnalyzeOptions& opts) {
  Report r;
  r.options = opts;
  r.n = sys.n();
  r.k = sys.k();
  r.q = sys.q();
  r.m = sys.inputs();
  r.l = sys.outputs();
  r.classification = classify(sys);
  r.theorem1 = theorem1_decide(sys, opts.trials, opts.seed);

  const auto lin = detect_linear_parameterization(sys);
  std::optional<bool> rank_deficient;
  std::optional<bool> no_unbalanced;
  if (const auto* d = std::get_if<LinearParamDecomposition>(&lin)) {
    r.theorem2 = theorem2_decide(sys, *d, opts.trials, opts.seed);
    rank_deficient = r.theorem2->reason == SfsReason::kGenericRankDeficient;
    if (d->is_binary) {
      try {
        auto t3 = theorem3_decide(sys, *d, feedback_pattern(sys), opts.budget);
        no_unbalanced = !t3.has_unbalanced_class;
        r.theorem3 = std::move(t3.verdict);
      } catch (const BudgetExhausted& ex) {
        r.theorem3_error = ex.what();
      }
    }
  }

  auto compare = [&](const char* a, bool va, const char* b, bool vb) {
    if (va != vb)
      r.disagreements.push_back(std::string(a) + " has_sfs=" + (va ? "true" : "false") + " but " + b +
                                " has_sfs=" + (vb ? "true" : "false"));
  };
  if (r.theorem2) compare("theorem1", r.theorem1.has_sfs, "theorem2", r.theorem2->has_sfs);
  if (r.theorem3) compare("theorem1", r.theorem1.has_sfs, "theorem3", r.theorem3->has_sfs);
  if (r.theorem2 && r.theorem3) compare("theorem2", r.theorem2->has_sfs, "theorem3", r.theorem3->has_sfs);
  if (rank_deficient && no_unbalanced && *rank_deficient != *no_unbalanced)
    r.disagreements.push_back(std::string("grank(A+BFC) < n is ") + (*rank_deficient ? "true" : "false") +
                              " but absence of an unbalanced similarity class is " + (*no_unbalanced ? "true" : "false"));
  r.consistent = r.disagreements.empty();

  const auto names = names_of(sys);
  std::mt19937_64 rng(opts.seed ^ 0x5eed5eed5eed5eedULL);
  // Zero is a special value for most entries, so samples avoid it.
  std::uniform_int_distribution<std::int64_t> magnitude(1, std::max<std::int64_t>(opts.spectrum_bound, 1));
  const std::size_t points = sys.q() == 0 ? std::min<std::size_t>(opts.spectrum_points, 1) : opts.spectrum_points;
  for (std::size_t i = 0; i < points; ++i) {
    RationalPoint pt;
    pt.seed = opts.seed;
    for (std::size_t j = 0; j < sys.q(); ++j) {
      const std::int64_t v = magnitude(rng);
      pt.values.emplace_back(static_cast<long>((rng() & 1) ? v : -v));
    }
    SpectrumAtPoint sp;
    for (std::size_t j = 0; j < sys.q(); ++j) sp.point[names[j]] = rational_to_string(pt.values[j]);
    sp.spectrum = fixed_spectrum(NumericSystem::at(sys, pt), opts.tol, opts.cluster_radius);
    if (!r.theorem1.has_sfs && !sp.spectrum.eigenvalues.empty())
      r.warnings.push_back("nonempty fixed spectrum at sampled point " + std::to_string(i + 1) +
                           " although no structurally fixed spectrum exists (special parameter value)");
    r.spectra.push_back(std::move(sp));
  }
  return r;
}

int exit_code(const Report& r) {
  if (!r.consistent) return kExitInconsistent;
  if (r.theorem3_error) return kExitBudget;
  return kExitOk;
}

json to_json(const Report& r) {
  json j;
  j["schema_version"] = kReportSchemaVersion;
  j["system"] = {{"n", r.n}, {"k", r.k}, {"q", r.q}, {"m", r.m}, {"l", r.l}};
  j["settings"] = {{"seed", r.options.seed},
                   {"trials", r.options.trials},
                   {"tol", r.options.tol},
                   {"cluster_radius", r.options.cluster_radius},
                   {"budget", r.options.budget},
                   {"spectrum_points", r.options.spectrum_points},
                   {"spectrum_bound", r.options.spectrum_bound}};
  const auto& c = r.classification;
  j["classification"] = {{"polynomial", c.polynomial},
                         {"linear", c.linear},
                         {"binary", c.binary},
                         {"unitary", c.unitary},
                         {"nonlinear_reason", c.nonlinear_reason ? json(*c.nonlinear_reason) : json(nullptr)}};
  json verdicts;
  verdicts["theorem1"] = verdict_json(r.theorem1);
  if (r.theorem2) verdicts["theorem2"] = verdict_json(*r.theorem2);
  if (r.theorem3) verdicts["theorem3"] = verdict_json(*r.theorem3);
  if (r.theorem3_error) verdicts["theorem3_error"] = *r.theorem3_error;
  j["verdicts"] = verdicts;
  j["fixed_spectrum"] = json::array();
  for (const auto& sp : r.spectra) {
    json s = spectrum_json(sp.spectrum);
    s["point"] = sp.point;
    j["fixed_spectrum"].push_back(s);
  }
  j["consistency"] = {{"consistent", r.consistent}, {"disagreements", r.disagreements}, {"warnings", r.warnings}};
  return j;
}

Report report_from_json(const json& j) {
  if (j.at("schema_version").get<int>() != kReportSchemaVersion)
    throw std::invalid_argument("report: unsupported schema version");
  Report r;
  const json& s = j.at("system");
  r.n = s.at("n").get<std::size_t>();
  r.k = s.at("k").get<std::size_t>();
  r.q = s.at("q").get<std::size_t>();
  r.m = s.at("m").get<std::size_t>();
  r.l = s.at("l").get<std::size_t>();
  const json& st = j.at("settings");
  r.options.seed = st.at("seed").get<std::uint64_t>();
  r.options.trials = st.at("trials").get<std::size_t>();
  r.options.tol = st.at("tol").get<double>();
  r.options.cluster_radius = st.at("cluster_radius").get<double>();
  r.options.budget = st.at("budget").get<std::size_t>();
  r.options.spectrum_points = st.at("spectrum_points").get<std::size_t>();
  r.options.spectrum_bound = st.at("spectrum_bound").get<std::int64_t>();
  const json& c = j.at("classification");
  r.classification.polynomial = c.at("polynomial").get<bool>();
  r.classification.linear = c.at("linear").get<bool>();
  r.classification.binary = c.at("binary").get<bool>();
  r.classification.unitary = c.at("unitary").get<bool>();
  if (!c.at("nonlinear_reason").is_null()) r.classification.nonlinear_reason = c.at("nonlinear_reason").get<std::string>();
  const json& v = j.at("verdicts");
  r.theorem1 = verdict_from(v.at("theorem1"), r.k);
  if (v.contains("theorem2")) r.theorem2 = verdict_from(v.at("theorem2"), r.k);
  if (v.contains("theorem3")) r.theorem3 = verdict_from(v.at("theorem3"), r.k);
  if (v.contains("theorem3_error")) r.theorem3_error = v.at("theorem3_error").get<std::string>();
  for (const auto& sj : j.at("fixed_spectrum")) {
    SpectrumAtPoint sp;
    sp.point = sj.at("point").get<std::map<std::string, std::string>>();
    sp.spectrum = spectrum_from(sj, r.k);
    r.spectra.push_back(std::move(sp));
  }
  const json& cons = j.at("consistency");
  r.consistent = cons.at("consistent").get<bool>();
  r.disagreements = cons.at("disagreements").get<std::vector<std::string>>();
  r.warnings = cons.at("warnings").get<std::vector<std::string>>();
  return r;
}

std::string to_text(const Report& r) {
  std::ostringstream os;
  const auto& c = r.classification;
  os << "system: n=" << r.n << " k=" << r.k << " q=" << r.q << " m=" << r.m << " l=" << r.l << '\n';
  os << "classification: polynomial=" << c.polynomial << " linear=" << c.linear << " binary=" << c.binary
     << " unitary=" << c.unitary << '\n';
  if (c.nonlinear_reason) os << "  not linear: " << *c.nonlinear_reason << '\n';
  os << verdict_text("theorem1", r.theorem1);
  if (r.theorem2) os << verdict_text("theorem2", *r.theorem2);
  if (r.theorem3) os << verdict_text("theorem3", *r.theorem3);
  if (r.theorem3_error) os << "theorem3: " << *r.theorem3_error << '\n';
  for (const auto& sp : r.spectra) {
    os << "fixed spectrum at {";
    bool first = true;
    for (const auto& [name, value] : sp.point) {
      os << (first ? "" : ", ") << name << '=' << value;
      first = false;
    }
    os << "}:";
    if (sp.spectrum.eigenvalues.empty()) os << " (empty)";
    for (const auto& e : sp.spectrum.eigenvalues) os << ' ' << format_complex(e.value);
    os << '\n';
  }
  os << "consistent: " << (r.consistent ? "yes" : "NO") << '\n';
  for (const auto& d : r.disagreements) os << "  disagreement: " << d << '\n';
  for (const auto& w : r.warnings) os << "  warning: " << w << '\n';
  return os.str();
}

RationalPoint parse_assignments(const MultiChannelSystem& sys, const std::vector<std::string>& assignments) {
  const auto names = names_of(sys);
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < names.size(); ++i) index[names[i]] = i;
  RationalPoint pt;
  pt.values.assign(sys.q(), Rational(0));
  std::vector<bool> assigned(sys.q(), false);
  for (const auto& a : assignments) {
    const auto eq = a.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("assignment \"" + a + "\" is not of the form name=value");
    const std::string name = a.substr(0, eq);
    auto it = index.find(name);
    if (it == index.end()) throw std::invalid_argument("unknown parameter \"" + name + "\"");
    if (assigned[it->second]) throw std::invalid_argument("parameter \"" + name + "\" assigned twice");
    pt.values[it->second] = rational_from_string(a.substr(eq + 1));
    assigned[it->second] = true;
  }
  std::string missing;
  for (std::size_t i = 0; i < names.size(); ++i)
    if (!assigned[i]) missing += (missing.empty() ? "" : ", ") + names[i];
  if (!missing.empty()) throw std::invalid_argument("unassigned parameters: " + missing);
  return pt;
}

FixedModesReport fixed_modes_at(const MultiChannelSystem& sys, const RationalPoint& pt, double tol,
                                std::size_t oracle_samples, std::uint64_t seed, double cluster_radius) {
  const auto names = names_of(sys);
  FixedModesReport r;
  for (std::size_t i = 0; i < sys.q(); ++i) r.point[names[i]] = rational_to_string(pt.values.at(i));
  const NumericSystem ns = NumericSystem::at(sys, pt);
  r.pencil = fixed_spectrum(ns, tol, cluster_radius);
  r.oracle = random_feedback_oracle(ns, oracle_samples, seed, cluster_radius);
  r.oracle_samples = oracle_samples;
  r.seed = seed;
  r.agree = same_spectrum(values_of(r.pencil), r.oracle, cluster_radius);
  return r;
}

json to_json(const FixedModesReport& r) {
  json j;
  j["point"] = r.point;
  j["pencil"] = spectrum_json(r.pencil);
  j["oracle"] = {{"samples", r.oracle_samples}, {"seed", r.seed}, {"eigenvalues", json::array()}};
  for (const auto& z : r.oracle) j["oracle"]["eigenvalues"].push_back({{"re", fold_zero(z.real())}, {"im", fold_zero(z.imag())}});
  j["agree"] = r.agree;
  return j;
}

std::string to_text(const FixedModesReport& r) {
  std::ostringstream os;
  os << "pencil route:";
  if (r.pencil.eigenvalues.empty()) os << " (empty)";
  for (const auto& e : r.pencil.eigenvalues) {
    os << ' ' << format_complex(e.value) << " [";
    for (std::size_t i = 0; i < e.witnesses.size(); ++i) os << (i ? " " : "") << e.witnesses[i].to_string();
    os << ']';
  }
  os << "\nrandom-feedback oracle (" << r.oracle_samples << " samples):";
  if (r.oracle.empty()) os << " (empty)";
  for (const auto& z : r.oracle) os << ' ' << format_complex(z);
  os << "\nagree: " << (r.agree ? "yes" : "NO") << '\n';
  return os.str();
}

CrosscheckReport crosscheck(const MultiChannelSystem& sys, std::uint64_t seed, std::size_t trials,
                            std::size_t budget) {
  const auto lin = detect_linear_parameterization(sys);
  const auto* d = std::get_if<LinearParamDecomposition>(&lin);
  if (!d) throw std::invalid_argument("crosscheck: system is not linearly parameterized (" + std::get<NotLinear>(lin).detail + ")");
  if (!d->is_binary) throw std::invalid_argument("crosscheck: linear parameterization is not binary");
  CrosscheckReport r;
  r.n = sys.n();
  r.seed = seed;
  r.trials = trials;
  r.budget = budget;
  r.closed_loop_grank = grank(closed_loop_pattern(sys), trials, seed);
  r.rank_deficient = r.closed_loop_grank < sys.n();
  const auto classes = similarity_classes(build_graph(sys, *d, feedback_pattern(sys)), budget);
  r.similarity_classes = classes.size();
  for (const auto& c : classes) {
    r.cycle_subgraphs += c.odd_count + c.even_count;
    if (!c.balanced()) ++r.unbalanced_classes;
  }
  r.no_unbalanced_class = r.unbalanced_classes == 0;
  r.agree = r.rank_deficient == r.no_unbalanced_class;
  return r;
}

json to_json(const CrosscheckReport& r) {
  return {{"n", r.n},
          {"algebraic", {{"closed_loop_grank", r.closed_loop_grank}, {"rank_deficient", r.rank_deficient}}},
          {"graph",
           {{"cycle_subgraphs", r.cycle_subgraphs},
            {"similarity_classes", r.similarity_classes},
            {"unbalanced_classes", r.unbalanced_classes},
            {"no_unbalanced_class", r.no_unbalanced_class}}},
          {"agree", r.agree},
          {"settings", {{"seed", r.seed}, {"trials", r.trials}, {"budget", r.budget}}}};
}

std::string to_text(const CrosscheckReport& r) {
  std::ostringstream os;
  os << "algebraic route: grank(A+BFC) = " << r.closed_loop_grank << " (n = " << r.n << ") -> rank deficient: "
     << (r.rank_deficient ? "yes" : "no") << '\n';
  os << "graph route: " << r.cycle_subgraphs << " multi-colored cycle subgraphs in " << r.similarity_classes
     << " similarity classes, " << r.unbalanced_classes << " unbalanced -> no unbalanced class: "
     << (r.no_unbalanced_class ? "yes" : "no") << '\n';
  os << "agree: " << (r.agree ? "yes" : "NO") << '\n';
  return os.str();
}

std::string graph_dot(const MultiChannelSystem& sys) {
  const auto lin = detect_linear_parameterization(sys);
  const auto* d = std::get_if<LinearParamDecomposition>(&lin);
  if (!d) throw std::invalid_argument("graph: system is not linearly parameterized (" + std::get<NotLinear>(lin).detail + ")");
  if (!d->is_binary) throw std::invalid_argument("graph: linear parameterization is not binary; graphs cannot carry coefficients");
  return export_dot(build_graph(sys, *d, feedback_pattern(sys)));
}

}  // namespace sfs
