#include "qgc/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

#include "qgc/error.hpp"

namespace qgc {

const char* to_string(EdgeKind kind) {
  return kind == EdgeKind::Finite ? "finite" : "infinite";
}

const char* to_string(BoundaryCondition bc) {
  switch (bc) {
    case BoundaryCondition::Dirichlet: return "D";
    case BoundaryCondition::Neumann: return "N";
    case BoundaryCondition::NeumannKirchhoff: return "NK";
  }
  return "?";
}

const char* to_string(EdgeEnd end) { return end == EdgeEnd::Start ? "start" : "finish"; }

MetricGraph::MetricGraph(std::vector<EdgeSpec> edges, std::vector<VertexSpec> vertices)
    : edges_(std::move(edges)), vertices_(std::move(vertices)) {
  std::stable_partition(edges_.begin(), edges_.end(),
                        [](const EdgeSpec& e) { return e.kind == EdgeKind::Finite; });
  finite_count_ = static_cast<int>(std::count_if(
      edges_.begin(), edges_.end(), [](const EdgeSpec& e) { return e.kind == EdgeKind::Finite; }));
}

MetricGraph MetricGraph::from_edges(std::vector<EdgeSpec> edges,
                                    std::vector<std::pair<int, BoundaryCondition>> vertices) {
  std::vector<VertexSpec> vs;
  vs.reserve(vertices.size());
  for (const auto& [id, bc] : vertices) vs.push_back(VertexSpec{id, bc, {}});
  auto attach = [&](int vid, Incidence inc) {
    for (auto& v : vs) {
      if (v.id == vid) {
        v.incident.push_back(inc);
        return;
      }
    }
  };
  for (const auto& e : edges) {
    attach(e.from, {e.id, EdgeEnd::Start});
    if (e.kind == EdgeKind::Finite && e.to) attach(*e.to, {e.id, EdgeEnd::Finish});
  }
  return MetricGraph(std::move(edges), std::move(vs));
}

std::optional<std::size_t> MetricGraph::edge_position(int edge_id) const {
  for (std::size_t i = 0; i < edges_.size(); ++i)
    if (edges_[i].id == edge_id) return i;
  return std::nullopt;
}

const VertexSpec* MetricGraph::find_vertex(int vertex_id) const {
  for (const auto& v : vertices_)
    if (v.id == vertex_id) return &v;
  return nullptr;
}

bool MetricGraph::is_self_loop(std::size_t pos) const {
  const auto& e = edges_.at(pos);
  return e.kind == EdgeKind::Finite && e.to && *e.to == e.from;
}

std::optional<int> MetricGraph::end_vertex(std::size_t pos, EdgeEnd end) const {
  const auto& e = edges_.at(pos);
  int vid = 0;
  if (end == EdgeEnd::Start) {
    vid = e.from;
  } else {
    if (e.kind != EdgeKind::Finite || !e.to) return std::nullopt;
    vid = *e.to;
  }
  if (!find_vertex(vid)) return std::nullopt;
  return vid;
}

MetricGraph build_tadpole(double head_length, double tail_period) {
  if (!(head_length > 0.0) || !(tail_period > 0.0))
    throw Error(ErrorCode::NonPositiveLength, "tadpole lengths must be positive");
  std::vector<EdgeSpec> edges{
      {1, EdgeKind::Finite, head_length, 0, 0},
      {2, EdgeKind::InfinitePeriodic, tail_period, 0, std::nullopt},
  };
  return MetricGraph::from_edges(std::move(edges), {{0, BoundaryCondition::NeumannKirchhoff}});
}

MetricGraph build_star(const std::vector<double>& finite_lengths,
                       const std::vector<double>& infinite_periods) {
  if (finite_lengths.empty() && infinite_periods.empty())
    throw Error(ErrorCode::EmptyGraph, "star needs at least one edge");
  for (double l : finite_lengths)
    if (!(l > 0.0)) throw Error(ErrorCode::NonPositiveLength, "finite edge length must be positive");
  for (double l : infinite_periods)
    if (!(l > 0.0)) throw Error(ErrorCode::NonPositiveLength, "period must be positive");

  const int n = static_cast<int>(finite_lengths.size());
  std::vector<EdgeSpec> edges;
  std::vector<std::pair<int, BoundaryCondition>> vertices;
  // A centre touching a single edge has no coupling to impose; Neumann is
  // the degree-one form of the Kirchhoff condition.
  const std::size_t degree = finite_lengths.size() + infinite_periods.size();
  vertices.emplace_back(0, degree > 1 ? BoundaryCondition::NeumannKirchhoff
                                      : BoundaryCondition::Neumann);
  for (int j = 0; j < n; ++j) {
    edges.push_back({j + 1, EdgeKind::Finite, finite_lengths[j], j + 1, 0});
    vertices.emplace_back(j + 1, BoundaryCondition::Neumann);
  }
  for (std::size_t j = 0; j < infinite_periods.size(); ++j)
    edges.push_back({n + 1 + static_cast<int>(j), EdgeKind::InfinitePeriodic, infinite_periods[j],
                     0, std::nullopt});
  return MetricGraph::from_edges(std::move(edges), std::move(vertices));
}

ValidationReport validate(const MetricGraph& g) {
  ValidationReport report;
  auto add = [&](std::optional<int> v, std::optional<int> e, std::string msg) {
    report.violations.push_back({v, e, std::move(msg)});
  };

  std::set<int> seen_edges;
  for (const auto& e : g.edges()) {
    if (!seen_edges.insert(e.id).second) add(std::nullopt, e.id, "duplicate edge id");
    if (!(e.length > 0.0)) add(std::nullopt, e.id, "edge length must be positive");
    if (e.kind == EdgeKind::InfinitePeriodic && e.to)
      add(std::nullopt, e.id, "infinite edge must reference exactly one vertex");
    if (e.kind == EdgeKind::Finite && !e.to)
      add(std::nullopt, e.id, "finite edge must reference two endpoints");
  }
  std::set<int> seen_vertices;
  for (const auto& v : g.vertices())
    if (!seen_vertices.insert(v.id).second) add(v.id, std::nullopt, "duplicate vertex id");

  // Each edge end must be listed by exactly the vertex it references.
  std::map<std::pair<int, EdgeEnd>, int> listed;
  for (const auto& v : g.vertices()) {
    for (const auto& inc : v.incident) {
      ++listed[{inc.edge, inc.end}];
      auto pos = g.edge_position(inc.edge);
      if (!pos) {
        add(v.id, inc.edge, "incidence references unknown edge");
        continue;
      }
      const auto& e = g.edges()[*pos];
      const bool matches = inc.end == EdgeEnd::Start
                               ? e.from == v.id
                               : (e.kind == EdgeKind::Finite && e.to && *e.to == v.id);
      if (!matches) add(v.id, inc.edge, "incidence inconsistent with edge endpoints");
    }
  }
  for (const auto& e : g.edges()) {
    std::vector<EdgeEnd> ends{EdgeEnd::Start};
    if (e.kind == EdgeKind::Finite && e.to) ends.push_back(EdgeEnd::Finish);
    for (EdgeEnd end : ends) {
      const int vid = end == EdgeEnd::Start ? e.from : *e.to;
      const int count = listed.count({e.id, end}) ? listed[{e.id, end}] : 0;
      if (!g.find_vertex(vid) || count == 0)
        add(std::nullopt, e.id, "unmapped edge end");
      else if (count > 1)
        add(std::nullopt, e.id, "edge end mapped to multiple vertices");
    }
  }

  for (const auto& v : g.vertices()) {
    const std::size_t degree = v.incident.size();
    if (degree == 0) {
      add(v.id, std::nullopt, "isolated vertex");
    } else if (degree == 1) {
      if (v.bc == BoundaryCondition::NeumannKirchhoff)
        add(v.id, std::nullopt, "external vertex must be Dirichlet or Neumann");
    } else if (v.bc != BoundaryCondition::NeumannKirchhoff) {
      add(v.id, std::nullopt, "internal vertex must be NK");
    }
  }

  // Connectivity over mapped ends; edges with no mapped end are already
  // reported as unmapped.
  if (!g.vertices().empty()) {
    std::map<int, int> parent;
    for (const auto& v : g.vertices()) parent[v.id] = v.id;
    auto find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (std::size_t p = 0; p < g.edges().size(); ++p) {
      auto a = g.end_vertex(p, EdgeEnd::Start);
      auto b = g.end_vertex(p, EdgeEnd::Finish);
      if (a && b) parent[find(*a)] = find(*b);
    }
    const int root = find(g.vertices().front().id);
    bool connected = true;
    for (const auto& v : g.vertices())
      if (!v.incident.empty() && find(v.id) != root) connected = false;
    if (!connected) add(std::nullopt, std::nullopt, "graph is not connected");
  } else if (!g.edges().empty()) {
    add(std::nullopt, std::nullopt, "graph has edges but no vertices");
  }

  std::stable_sort(report.violations.begin(), report.violations.end(),
                   [](const Violation& a, const Violation& b) {
                     return std::make_tuple(a.vertex.value_or(-1), a.edge.value_or(-1)) <
                            std::make_tuple(b.vertex.value_or(-1), b.edge.value_or(-1));
                   });
  return report;
}

bool is_tadpole(const MetricGraph& g) {
  if (g.finite_count() != 1 || g.infinite_count() != 1 || g.vertices().size() != 1) return false;
  if (!g.is_self_loop(0)) return false;
  const auto& v = g.vertices().front();
  return g.edges()[1].from == v.id && v.bc == BoundaryCondition::NeumannKirchhoff;
}

bool is_unit_tadpole(const MetricGraph& g, double tol) {
  return is_tadpole(g) && std::abs(g.edges()[0].length - 1.0) <= tol &&
         std::abs(g.edges()[1].length - 1.0) <= tol;
}

bool is_star(const MetricGraph& g) {
  if (g.edges().empty()) return false;
  int centre = 0;
  if (g.infinite_count() > 0) {
    centre = g.edges()[g.finite_count()].from;
  } else {
    if (!g.edges()[0].to) return false;
    centre = *g.edges()[0].to;
  }
  std::set<int> externals;
  for (std::size_t p = 0; p < g.edges().size(); ++p) {
    const auto& e = g.edges()[p];
    if (e.kind == EdgeKind::InfinitePeriodic) {
      if (e.from != centre) return false;
    } else {
      if (!e.to || *e.to != centre || e.from == centre) return false;
      if (!externals.insert(e.from).second) return false;
    }
  }
  return g.vertices().size() == externals.size() + 1 && g.find_vertex(centre) != nullptr;
}

}  // namespace qgc
