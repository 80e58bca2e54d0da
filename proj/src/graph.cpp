#include "sfs/graph.hpp"

#include <algorithm>
#include <set>
#include <tuple>
#include <sstream>

namespace sfs {

VertexKind SystemGraph::kind(std::size_t v) const {
  if (v < n) return VertexKind::kState;
  if (v < n + m) return VertexKind::kInput;
  if (v < n + m + l) return VertexKind::kOutput;
  throw std::out_of_range("SystemGraph: vertex id out of range");
}

std::string SystemGraph::label(std::size_t v) const {
  switch (kind(v)) {
    case VertexKind::kState: return "x" + std::to_string(v + 1);
    case VertexKind::kInput: return "u" + std::to_string(v - n + 1);
    case VertexKind::kOutput: return "y" + std::to_string(v - n - m + 1);
  }
  return "?";
}

std::vector<std::string> check_graph_properties(const SystemGraph& g) {
  std::vector<std::string> bad;
  auto arc_str = [&](const Arc& a) {
    return "(" + g.label(a.from) + "," + g.label(a.to) + ")_" + std::to_string(a.color);
  };

  // (i) input/output adjacency
  for (const Arc& a : g.arcs) {
    const VertexKind f = g.kind(a.from), t = g.kind(a.to);
    if ((t == VertexKind::kInput && f != VertexKind::kOutput) || (f == VertexKind::kInput && t != VertexKind::kState) ||
        (t == VertexKind::kOutput && f != VertexKind::kState) || (f == VertexKind::kOutput && t != VertexKind::kInput))
      bad.push_back("property (i): arc " + arc_str(a) + " connects the wrong vertex classes");
  }

  // (ii) B/C colors disjoint; feedback colors private
  std::set<std::uint32_t> b_colors, c_colors, sys_colors, f_colors;
  for (const Arc& a : g.arcs) {
    if (a.kind == ArcKind::kB) b_colors.insert(a.color);
    if (a.kind == ArcKind::kC) c_colors.insert(a.color);
    if (a.kind == ArcKind::kF) {
      if (!f_colors.insert(a.color).second) bad.push_back("property (ii): feedback color reused by " + arc_str(a));
    } else {
      sys_colors.insert(a.color);
    }
  }
  for (auto c : b_colors)
    if (c_colors.count(c)) bad.push_back("property (ii): color " + std::to_string(c) + " appears in both B and C arcs");
  for (auto c : f_colors)
    if (sys_colors.count(c) || c <= g.system_colors)
      bad.push_back("property (ii): feedback color " + std::to_string(c) + " collides with a system color");

  // (iii) parallel arcs carry distinct colors; no parallel feedback arcs
  std::set<std::tuple<std::size_t, std::size_t, std::uint32_t>> seen;
  std::set<std::pair<std::size_t, std::size_t>> f_pairs;
  for (const Arc& a : g.arcs) {
    if (!seen.insert({a.from, a.to, a.color}).second) bad.push_back("property (iii): duplicate arc " + arc_str(a));
    if (a.kind == ArcKind::kF && !f_pairs.insert({a.from, a.to}).second)
      bad.push_back("property (iii): parallel feedback arc " + arc_str(a));
  }

  // (iv) rectangle completion per color within A+B and within A+C
  auto rectangle = [&](ArcKind other, const char* name) {
    std::map<std::uint32_t, std::pair<std::set<std::size_t>, std::set<std::size_t>>> ends;
    std::set<std::tuple<std::uint32_t, std::size_t, std::size_t>> present;
    for (const Arc& a : g.arcs) {
      if (a.kind != ArcKind::kA && a.kind != other) continue;
      ends[a.color].first.insert(a.from);
      ends[a.color].second.insert(a.to);
      present.insert({a.color, a.from, a.to});
    }
    for (const auto& [color, st] : ends)
      for (auto j : st.first)
        for (auto i : st.second)
          if (!present.count({color, j, i}))
            bad.push_back(std::string("property (iv): missing arc (") + g.label(j) + "," + g.label(i) + ")_" +
                          std::to_string(color) + " in " + name);
  };
  rectangle(ArcKind::kB, "E_A+E_B");
  rectangle(ArcKind::kC, "E_A+E_C");
  return bad;
}

SystemGraph build_graph(const MultiChannelSystem& sys, const LinearParamDecomposition& decomp,
                        const FeedbackPattern& fp) {
  const ParamMatrix sm = system_matrix(sys);
  if (decomp.rows != sm.rows() || decomp.cols != sm.cols() || decomp.reconstruct() != sm)
    throw std::invalid_argument("build_graph: decomposition does not describe this system");
  if (!decomp.is_binary) throw std::invalid_argument("build_graph: graphs are defined only under the binary assumption");

  SystemGraph g;
  g.n = sys.n();
  g.m = sys.inputs();
  g.l = sys.outputs();
  g.system_colors = sys.q();
  g.feedback_colors = fp.param_count;
  const std::size_t n = g.n;
  for (const auto& [key, poly] : sm.entries()) {
    const auto [i, j] = key;
    for (auto r : poly.parameters()) {
      const auto color = static_cast<std::uint32_t>(r + 1);
      if (i < n && j < n)
        g.arcs.push_back({g.state(j), g.state(i), color, ArcKind::kA});
      else if (i < n)
        g.arcs.push_back({g.input(j - n), g.state(i), color, ArcKind::kB});
      else
        g.arcs.push_back({g.state(j), g.output(i - n), color, ArcKind::kC});
    }
  }
  for (const auto& [key, poly] : fp.F.entries())
    for (auto r : poly.parameters())
      g.arcs.push_back(
          {g.output(key.second), g.input(key.first), static_cast<std::uint32_t>(sys.q() + r + 1), ArcKind::kF});
  std::sort(g.arcs.begin(), g.arcs.end());

  if (auto bad = check_graph_properties(g); !bad.empty()) throw std::logic_error("build_graph: " + bad.front());
  return g;
}

std::vector<std::vector<std::size_t>> strongly_connected_components(const SystemGraph& g) {
  const std::size_t nv = g.vertex_count();
  std::vector<std::vector<std::size_t>> out_adj(nv);
  for (const Arc& a : g.arcs) out_adj[a.from].push_back(a.to);

  // Iterative Tarjan.
  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(nv, kUnset), low(nv, 0);
  std::vector<bool> on_stack(nv, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> comps;
  std::size_t counter = 0;
  for (std::size_t root = 0; root < nv; ++root) {
    if (index[root] != kUnset) continue;
    std::vector<std::pair<std::size_t, std::size_t>> call{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [v, next] = call.back();
      if (next < out_adj[v].size()) {
        const std::size_t w = out_adj[v][next++];
        if (index[w] == kUnset) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      const std::size_t done = v;
      call.pop_back();
      if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
      if (low[done] == index[done]) {
        std::vector<std::size_t> comp;
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp.push_back(w);
        } while (w != done);
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
      }
    }
  }
  std::sort(comps.begin(), comps.end());
  return comps;
}

bool state_only_scc_exists(const SystemGraph& g) {
  for (const auto& comp : strongly_connected_components(g))
    if (!comp.empty() && comp.back() < g.n) return true;
  return false;
}

// --------------------------------------------------------------- enumeration

namespace {

class CycleEnumerator {
 public:
  CycleEnumerator(const SystemGraph& g, std::size_t budget, const std::function<void(const CycleSubgraph&)>& visit)
      : g_(g),
        budget_(budget),
        visit_(visit),
        out_(g.vertex_count()),
        covered_(g.vertex_count(), false),
        color_used_(g.system_colors + g.feedback_colors + 2, false) {
    for (const Arc& a : g.arcs) {
      if (a.color >= color_used_.size()) color_used_.resize(a.color + 1, false);
      out_[a.from].push_back(&a);
    }
  }

  void run() { next_cycle(); }

 private:
  void tick() {
    if (++explored_ > budget_) throw BudgetExhausted(explored_);
  }

  void next_cycle() {
    tick();
    std::size_t start = 0;
    while (start < g_.n && covered_[start]) ++start;
    if (start == g_.n) {
      emit();
      return;
    }
    covered_[start] = true;
    cycles_.emplace_back();
    extend(start, start);
    cycles_.pop_back();
    covered_[start] = false;
  }

  void extend(std::size_t start, std::size_t v) {
    tick();
    for (const Arc* a : out_[v]) {
      if (color_used_[a->color]) continue;
      if (a->to == start) {
        color_used_[a->color] = true;
        cycles_.back().push_back(*a);
        next_cycle();
        cycles_.back().pop_back();
        color_used_[a->color] = false;
      } else if (!covered_[a->to]) {
        color_used_[a->color] = true;
        covered_[a->to] = true;
        cycles_.back().push_back(*a);
        extend(start, a->to);
        cycles_.back().pop_back();
        covered_[a->to] = false;
        color_used_[a->color] = false;
      }
    }
  }

  void emit() {
    CycleSubgraph s;
    s.cycles = cycles_;
    for (const auto& c : cycles_)
      for (const Arc& a : c) s.color_set.push_back(a.color);
    std::sort(s.color_set.begin(), s.color_set.end());
    visit_(s);
  }

  const SystemGraph& g_;
  std::size_t budget_;
  const std::function<void(const CycleSubgraph&)>& visit_;
  std::vector<std::vector<const Arc*>> out_;
  std::vector<bool> covered_;
  std::vector<bool> color_used_;
  std::vector<std::vector<Arc>> cycles_;
  std::size_t explored_ = 0;
};

}  // namespace

void for_each_cycle_subgraph(const SystemGraph& g, std::size_t budget,
                             const std::function<void(const CycleSubgraph&)>& visit) {
  CycleEnumerator(g, budget, visit).run();
}

std::vector<CycleSubgraph> enumerate_cycle_subgraphs(const SystemGraph& g, std::size_t budget) {
  std::vector<CycleSubgraph> out;
  for_each_cycle_subgraph(g, budget, [&](const CycleSubgraph& s) { out.push_back(s); });
  return out;
}

namespace {

void tally(std::map<std::vector<std::uint32_t>, SimilarityClass>& classes, const CycleSubgraph& s) {
  auto& cls = classes[s.color_set];
  cls.color_set = s.color_set;
  if (s.cycle_count() % 2)
    ++cls.odd_count;
  else
    ++cls.even_count;
}

std::vector<SimilarityClass> flatten(std::map<std::vector<std::uint32_t>, SimilarityClass>&& classes) {
  std::vector<SimilarityClass> out;
  out.reserve(classes.size());
  for (auto& [key, cls] : classes) out.push_back(std::move(cls));
  return out;
}

}  // namespace

std::vector<SimilarityClass> similarity_classes(const std::vector<CycleSubgraph>& subs) {
  std::map<std::vector<std::uint32_t>, SimilarityClass> classes;
  for (const auto& s : subs) tally(classes, s);
  return flatten(std::move(classes));
}

std::vector<SimilarityClass> similarity_classes(const SystemGraph& g, std::size_t budget) {
  std::map<std::vector<std::uint32_t>, SimilarityClass> classes;
  for_each_cycle_subgraph(g, budget, [&](const CycleSubgraph& s) { tally(classes, s); });
  return flatten(std::move(classes));
}

// ---------------------------------------------------------------- block form

bool satisfies_block_form(const MultiChannelSystem& sys, const BlockForm& form) {
  const std::size_t n = sys.n();
  if (form.order.size() != n || form.n1 + form.n2 + form.n3 != n || form.n2 == 0) return false;
  std::vector<int> block(n, -1);
  for (std::size_t pos = 0; pos < n; ++pos) {
    const std::size_t s = form.order[pos];
    if (s >= n || block[s] != -1) return false;
    block[s] = pos < form.n1 ? 0 : (pos < form.n1 + form.n2 ? 1 : 2);
  }
  for (const auto& [key, p] : sys.A().entries())
    if (block[key.first] < block[key.second]) return false;
  const auto [b_s, c_compl] = split(sys, form.subset);
  for (const auto& [key, p] : b_s.entries())
    if (block[key.first] != 2) return false;
  for (const auto& [key, p] : c_compl.entries())
    if (block[key.second] != 0) return false;
  return true;
}

std::optional<BlockForm> block_form_from_graph(const MultiChannelSystem& sys, const SystemGraph& g) {
  const auto comps = strongly_connected_components(g);
  auto it = std::find_if(comps.begin(), comps.end(), [&](const auto& c) { return !c.empty() && c.back() < g.n; });
  if (it == comps.end()) return std::nullopt;
  const auto& middle = *it;

  std::vector<std::vector<std::size_t>> in_adj(g.vertex_count());
  for (const Arc& a : g.arcs) in_adj[a.to].push_back(a.from);
  std::vector<bool> reaches(g.vertex_count(), false);
  std::vector<std::size_t> work(middle.begin(), middle.end());
  for (auto v : middle) reaches[v] = true;
  while (!work.empty()) {
    const std::size_t v = work.back();
    work.pop_back();
    for (auto w : in_adj[v])
      if (!reaches[w]) {
        reaches[w] = true;
        work.push_back(w);
      }
  }
  std::vector<bool> in_middle(g.n, false);
  for (auto v : middle) in_middle[v] = true;

  BlockForm form;
  std::vector<std::size_t> first, last;
  for (std::size_t s = 0; s < g.n; ++s) {
    if (in_middle[s]) continue;
    (reaches[s] ? first : last).push_back(s);
  }
  std::vector<bool> in_first(g.n, false);
  for (auto s : first) in_first[s] = true;
  std::vector<std::size_t> subset;
  for (std::size_t i = 0; i < sys.k(); ++i) {
    bool reads_first_only = true;
    for (const auto& [key, p] : sys.C_block(i).entries())
      if (!in_first[key.second]) reads_first_only = false;
    if (!reads_first_only) subset.push_back(i);
  }
  form.subset = ChannelSubset(subset, sys.k());
  form.order = first;
  form.order.insert(form.order.end(), middle.begin(), middle.end());
  form.order.insert(form.order.end(), last.begin(), last.end());
  form.n1 = first.size();
  form.n2 = middle.size();
  form.n3 = last.size();
  if (!satisfies_block_form(sys, form)) throw std::logic_error("block_form_from_graph: reconstructed form is invalid");
  return form;
}

// ------------------------------------------------------------------ decision

Theorem3Result theorem3_decide(const MultiChannelSystem& sys, const LinearParamDecomposition& decomp,
                               const FeedbackPattern& fp, std::size_t budget) {
  const SystemGraph g = build_graph(sys, decomp, fp);
  Theorem3Result r;
  std::map<std::vector<std::uint32_t>, SimilarityClass> classes;
  for_each_cycle_subgraph(g, budget, [&](const CycleSubgraph& s) {
    ++r.cycle_subgraphs;
    tally(classes, s);
  });
  r.classes = flatten(std::move(classes));
  r.has_unbalanced_class =
      std::any_of(r.classes.begin(), r.classes.end(), [](const SimilarityClass& c) { return !c.balanced(); });
  r.has_state_only_scc = state_only_scc_exists(g);
  if (r.has_state_only_scc) r.block_form = block_form_from_graph(sys, g);

  auto& v = r.verdict;
  v.route = DecisionRoute::kTheorem3;
  v.diagnostics.error_mode = "exact (deterministic enumeration and SCC decomposition)";
  v.diagnostics.notes.push_back("multi-colored cycle subgraphs: " + std::to_string(r.cycle_subgraphs) +
                                ", similarity classes: " + std::to_string(r.classes.size()));
  v.diagnostics.notes.push_back(std::string("unbalanced class exists: ") + (r.has_unbalanced_class ? "true" : "false"));
  v.diagnostics.notes.push_back(std::string("state-only SCC exists: ") + (r.has_state_only_scc ? "true" : "false"));
  if (!r.has_unbalanced_class) {
    v.has_sfs = true;
    v.reason = SfsReason::kGenericRankDeficient;
  } else if (r.has_state_only_scc) {
    v.has_sfs = true;
    v.reason = SfsReason::kProperSubspace;
    v.witness = r.block_form->subset;
  }
  return r;
}

std::string export_dot(const SystemGraph& g) {
  std::ostringstream os;
  os << "digraph G {\n";
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    const char* shape = g.kind(v) == VertexKind::kState ? "circle" : (g.kind(v) == VertexKind::kInput ? "box" : "diamond");
    os << "  " << g.label(v) << " [shape=" << shape << "];\n";
  }
  for (const Arc& a : g.arcs)
    os << "  " << g.label(a.from) << " -> " << g.label(a.to) << " [label=\"" << a.color << "\"];\n";
  os << "}\n";
  return os.str();
}

}  // namespace sfs
