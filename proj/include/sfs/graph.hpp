#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sfs/structural.hpp"
#include "sfs/system.hpp"

namespace sfs {

enum class VertexKind { kState, kInput, kOutput };
enum class ArcKind { kA, kB, kC, kF };

/// Arc (from -> to) of color `color`. Colors 1..q are system parameters,
/// q+1..q+q~ the feedback parameters.
struct Arc {
  std::size_t from = 0;
  std::size_t to = 0;
  std::uint32_t color = 0;
  ArcKind kind = ArcKind::kA;
  friend bool operator==(const Arc&, const Arc&) = default;
  friend auto operator<=>(const Arc&, const Arc&) = default;
};

/// Colored directed multigraph over state, input and output vertices.
///
/// Vertex ids: states 0..n-1, inputs n..n+m-1, outputs n+m..n+m+l-1.
struct SystemGraph {
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t l = 0;
  std::size_t system_colors = 0;    // q
  std::size_t feedback_colors = 0;  // q~
  std::vector<Arc> arcs;            // sorted by (from, to, color)

  std::size_t vertex_count() const { return n + m + l; }
  VertexKind kind(std::size_t v) const;
  std::string label(std::size_t v) const;  // x1.., u1.., y1..
  std::size_t state(std::size_t i) const { return i; }
  std::size_t input(std::size_t i) const { return n + i; }
  std::size_t output(std::size_t i) const { return n + m + i; }
};

/// Violations of the four structural properties of the graph; empty when all hold.
std::vector<std::string> check_graph_properties(const SystemGraph& g);

/// Builds the graph with feedback arcs. Requires a binary linear
/// parameterization; throws std::invalid_argument otherwise, and
/// std::logic_error if the built graph violates a structural property.
SystemGraph build_graph(const MultiChannelSystem& sys, const LinearParamDecomposition& decomp,
                        const FeedbackPattern& fp);

/// Strongly connected components in a deterministic order (each sorted).
std::vector<std::vector<std::size_t>> strongly_connected_components(const SystemGraph& g);

bool state_only_scc_exists(const SystemGraph& g);

/// Vertex-disjoint cycles covering every state vertex with pairwise distinct
/// arc colors. Cycles ordered by their minimum vertex; each starts there.
struct CycleSubgraph {
  std::vector<std::vector<Arc>> cycles;
  std::vector<std::uint32_t> color_set;  // sorted
  std::size_t cycle_count() const { return cycles.size(); }
  friend bool operator==(const CycleSubgraph&, const CycleSubgraph&) = default;
};

struct SimilarityClass {
  std::vector<std::uint32_t> color_set;
  std::size_t odd_count = 0;
  std::size_t even_count = 0;
  bool balanced() const { return odd_count == even_count; }
  friend bool operator==(const SimilarityClass&, const SimilarityClass&) = default;
};

inline constexpr std::size_t kDefaultBudget = 10'000'000;

/// Thrown when enumeration explores more than the budgeted partial states.
class BudgetExhausted : public std::runtime_error {
 public:
  explicit BudgetExhausted(std::size_t explored)
      : std::runtime_error("cycle-subgraph enumeration inconclusive: budget of partial states exhausted after " +
                           std::to_string(explored)),
        explored_(explored) {}
  std::size_t explored() const { return explored_; }

 private:
  std::size_t explored_;
};

/// Exact backtracking enumeration; calls `visit` once per subgraph.
void for_each_cycle_subgraph(const SystemGraph& g, std::size_t budget,
                             const std::function<void(const CycleSubgraph&)>& visit);
std::vector<CycleSubgraph> enumerate_cycle_subgraphs(const SystemGraph& g, std::size_t budget = kDefaultBudget);

/// Groups by color set (sorted by color set).
std::vector<SimilarityClass> similarity_classes(const std::vector<CycleSubgraph>& subs);
/// Streaming variant of similarity_classes(enumerate_cycle_subgraphs(g)).
std::vector<SimilarityClass> similarity_classes(const SystemGraph& g, std::size_t budget = kDefaultBudget);

/// Permutation block form: states ordered first-block, middle-block,
/// last-block, with A block lower triangular, B_S reaching only the last block
/// and C_{k-S} reading only the first block; the middle block is nonempty.
struct BlockForm {
  ChannelSubset subset;
  std::vector<std::size_t> order;  // state indices, new position -> old index
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  std::size_t n3 = 0;
};

/// Checks the zero pattern of the block form against the polynomial matrices.
bool satisfies_block_form(const MultiChannelSystem& sys, const BlockForm& form);

/// Reconstructs a block form from a state-only SCC of the graph (the SCC is
/// the middle block, its state ancestors the first block).
std::optional<BlockForm> block_form_from_graph(const MultiChannelSystem& sys, const SystemGraph& g);

struct Theorem3Result {
  StructuralVerdict verdict;
  bool has_unbalanced_class = false;
  bool has_state_only_scc = false;
  std::size_t cycle_subgraphs = 0;
  std::vector<SimilarityClass> classes;
  std::optional<BlockForm> block_form;
};

/// Graph route: SFS iff no unbalanced similarity class or a state-only SCC.
/// Propagates BudgetExhausted.
Theorem3Result theorem3_decide(const MultiChannelSystem& sys, const LinearParamDecomposition& decomp,
                               const FeedbackPattern& fp, std::size_t budget = kDefaultBudget);

/// DOT digraph: states are circles, inputs boxes, outputs diamonds; arc
/// labels are colors. LF line endings, stable ordering.
std::string export_dot(const SystemGraph& g);

}  // namespace sfs
