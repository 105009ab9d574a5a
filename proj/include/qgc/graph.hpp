#pragma once

#include <optional>
#include <string>
#include <vector>

namespace qgc {

enum class EdgeKind { Finite, InfinitePeriodic };
enum class BoundaryCondition { Dirichlet, Neumann, NeumannKirchhoff };
enum class EdgeEnd { Start, Finish };

const char* to_string(EdgeKind kind);
const char* to_string(BoundaryCondition bc);
const char* to_string(EdgeEnd end);

// One edge of the graph. The coordinate runs from 0 at `from`. Finite edges
// end at `to` (x = length); infinite edges have no far end and repeat with
// period `length`.
struct EdgeSpec {
  int id = 0;
  EdgeKind kind = EdgeKind::Finite;
  double length = 1.0;
  int from = 0;
  std::optional<int> to;
};

struct Incidence {
  int edge = 0;
  EdgeEnd end = EdgeEnd::Start;

  friend bool operator==(const Incidence&, const Incidence&) = default;
};

struct VertexSpec {
  int id = 0;
  BoundaryCondition bc = BoundaryCondition::NeumannKirchhoff;
  std::vector<Incidence> incident;
};

// Immutable metric graph: finite edges first (e_1..e_N), then the periodic
// half-lines (e_{N+1}..e_{N+Ñ}). Edge "position" below always means the index
// into edges(), which is the component index of graph functions.
class MetricGraph {
 public:
  MetricGraph() = default;
  MetricGraph(std::vector<EdgeSpec> edges, std::vector<VertexSpec> vertices);

  // Builds vertex incidence lists from the edge endpoints. Edge ends that
  // reference unknown vertex ids are left unmapped (validate() reports them).
  static MetricGraph from_edges(std::vector<EdgeSpec> edges,
                                std::vector<std::pair<int, BoundaryCondition>> vertices);

  const std::vector<EdgeSpec>& edges() const { return edges_; }
  const std::vector<VertexSpec>& vertices() const { return vertices_; }

  int finite_count() const { return finite_count_; }
  int infinite_count() const { return static_cast<int>(edges_.size()) - finite_count_; }

  std::optional<std::size_t> edge_position(int edge_id) const;
  const VertexSpec* find_vertex(int vertex_id) const;

  bool is_self_loop(std::size_t pos) const;

  // Vertex that the given end of the edge at `pos` lands on, if mapped.
  std::optional<int> end_vertex(std::size_t pos, EdgeEnd end) const;

 private:
  std::vector<EdgeSpec> edges_;
  std::vector<VertexSpec> vertices_;
  int finite_count_ = 0;
};

struct Violation {
  std::optional<int> vertex;
  std::optional<int> edge;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

MetricGraph build_tadpole(double head_length, double tail_period);
MetricGraph build_star(const std::vector<double>& finite_lengths,
                       const std::vector<double>& infinite_periods);

ValidationReport validate(const MetricGraph& g);

// Shape predicates used by basis and potential constructors.
bool is_tadpole(const MetricGraph& g);
bool is_unit_tadpole(const MetricGraph& g, double tol = 1e-14);
bool is_star(const MetricGraph& g);

}  // namespace qgc
