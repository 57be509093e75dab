#include "morse/cwcomplex.hpp"

#include "morse/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <unordered_map>

namespace morse {

namespace {

using Column = std::vector<std::size_t>;  // sorted row indices with coefficient 1 over GF(2)

Column symmetric_difference(const Column& a, const Column& b) {
  Column out;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

Column mod2(Column rows) {
  std::sort(rows.begin(), rows.end());
  Column out;
  for (std::size_t i = 0; i < rows.size();) {
    std::size_t j = i;
    while (j < rows.size() && rows[j] == rows[i]) ++j;
    if ((j - i) % 2 == 1) out.push_back(rows[i]);
    i = j;
  }
  return out;
}

// Rank of a GF(2) matrix given by columns, via standard pivot reduction.
std::size_t rank(std::vector<Column> columns) {
  std::unordered_map<std::size_t, std::size_t> pivot_owner;
  std::size_t r = 0;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    Column& col = columns[c];
    while (!col.empty()) {
      auto it = pivot_owner.find(col.back());
      if (it == pivot_owner.end()) break;
      col = symmetric_difference(col, columns[it->second]);
    }
    if (!col.empty()) {
      pivot_owner.emplace(col.back(), c);
      ++r;
    }
  }
  return r;
}

}  // namespace

MorseFiltration MorseFiltration::build(std::vector<Cell> cells) {
  std::unordered_map<std::size_t, std::size_t> position;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i].dim < 0 || cells[i].dim > 2)
      throw InvalidComplex(fmt::format("cell {} has unsupported dimension {}", cells[i].id, cells[i].dim));
    if (!position.emplace(cells[i].id, i).second)
      throw InvalidComplex(fmt::format("duplicate cell id {}", cells[i].id));
  }
  for (const auto& cell : cells) {
    if (cell.dim == 0 && !cell.boundary.empty())
      throw InvalidComplex(fmt::format("0-cell {} has a boundary", cell.id));
    for (std::size_t face : cell.boundary) {
      auto it = position.find(face);
      if (it == position.end())
        throw InvalidComplex(fmt::format("cell {} references missing face {}", cell.id, face));
      if (cells[it->second].dim != cell.dim - 1)
        throw InvalidComplex(fmt::format("cell {} has face {} of wrong dimension", cell.id, face));
    }
  }

  // Clamp in dimension order so faces are final before their cofaces read them.
  for (int dim = 1; dim <= 2; ++dim)
    for (auto& cell : cells)
      if (cell.dim == dim)
        for (std::size_t face : cell.boundary) cell.density = std::min(cell.density, cells[position[face]].density);

  std::vector<std::size_t> order(cells.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (cells[a].density != cells[b].density) return cells[a].density > cells[b].density;
    if (cells[a].dim != cells[b].dim) return cells[a].dim < cells[b].dim;
    return cells[a].id < cells[b].id;
  });

  std::unordered_map<std::size_t, std::size_t> renumber;
  for (std::size_t k = 0; k < order.size(); ++k) renumber[cells[order[k]].id] = k;

  MorseFiltration out;
  out.cells_.reserve(cells.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    Cell cell = std::move(cells[order[k]]);
    cell.id = k;
    for (auto& face : cell.boundary) face = renumber[face];
    out.cells_.push_back(std::move(cell));
  }
  return out;
}

std::vector<double> MorseFiltration::critical_values() const {
  std::vector<double> values;
  for (const auto& cell : cells_)
    if (values.empty() || values.back() != cell.density) values.push_back(cell.density);
  return values;
}

std::vector<std::size_t> superlevel_complex(const MorseFiltration& filtration, double a) {
  std::vector<std::size_t> ids;
  for (const auto& cell : filtration.cells())
    if (cell.density >= a) ids.push_back(cell.id);
  return ids;
}

CellCounts count_cells(const MorseFiltration& filtration, const std::vector<std::size_t>& ids) {
  CellCounts counts;
  for (std::size_t id : ids) {
    switch (filtration.cell(id).dim) {
      case 0: ++counts.vertices; break;
      case 1: ++counts.edges; break;
      default: ++counts.faces; break;
    }
  }
  return counts;
}

Betti betti(const MorseFiltration& filtration, const std::vector<std::size_t>& ids) {
  std::vector<char> present(filtration.size(), 0);
  for (std::size_t id : ids) present.at(id) = 1;

  std::vector<std::size_t> vertices;
  std::vector<Column> edge_boundaries;
  std::vector<Column> face_boundaries;
  std::map<std::size_t, std::size_t> vertex_slot;
  for (std::size_t id : ids) {
    const Cell& cell = filtration.cell(id);
    for (std::size_t face : cell.boundary)
      if (!present[face])
        throw InvalidComplex(fmt::format("cell {} is present but its face {} is not", id, face));
    if (cell.dim == 0) vertex_slot.emplace(id, vertex_slot.size());
  }
  for (std::size_t id : ids) {
    const Cell& cell = filtration.cell(id);
    if (cell.dim == 1) {
      Column col;
      for (std::size_t face : cell.boundary) col.push_back(vertex_slot.at(face));
      edge_boundaries.push_back(mod2(std::move(col)));
    } else if (cell.dim == 2) {
      face_boundaries.push_back(mod2(cell.boundary));
    }
  }

  // b0 by union-find over the 1-skeleton.
  std::vector<std::size_t> parent(vertex_slot.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  std::size_t components = vertex_slot.size();
  for (const auto& col : edge_boundaries)
    if (col.size() == 2) {
      const std::size_t a = find(col[0]);
      const std::size_t b = find(col[1]);
      if (a != b) {
        parent[a] = b;
        --components;
      }
    }

  const std::size_t rank1 = rank(edge_boundaries);
  const std::size_t rank2 = rank(face_boundaries);
  return {components, edge_boundaries.size() - rank1 - rank2};
}

Betti betti_at(const MorseFiltration& filtration, double a) {
  return betti(filtration, superlevel_complex(filtration, a));
}

std::vector<PersistenceInterval> loop_persistence(const MorseFiltration& filtration) {
  const auto& cells = filtration.cells();
  std::vector<Column> reduced(cells.size());
  std::unordered_map<std::size_t, std::size_t> pivot_owner;  // lowest row -> column
  std::vector<std::optional<std::size_t>> killer(cells.size());

  for (std::size_t c = 0; c < cells.size(); ++c) {
    Column col = mod2(cells[c].boundary);
    while (!col.empty()) {
      auto it = pivot_owner.find(col.back());
      if (it == pivot_owner.end()) break;
      col = symmetric_difference(col, reduced[it->second]);
    }
    if (!col.empty()) {
      pivot_owner.emplace(col.back(), c);
      killer[col.back()] = c;
    }
    reduced[c] = std::move(col);
  }

  std::vector<PersistenceInterval> intervals;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    // A 1-cell whose column reduced to zero closes a new loop.
    if (cells[c].dim != 1 || !reduced[c].empty()) continue;
    PersistenceInterval interval;
    interval.birth_cell = c;
    interval.birth = cells[c].density;
    interval.death_cell = killer[c];
    interval.death = killer[c] ? cells[*killer[c]].density : 0.0;
    interval.lifespan = interval.birth - interval.death;
    intervals.push_back(interval);
  }
  std::stable_sort(intervals.begin(), intervals.end(), [](const auto& a, const auto& b) {
    if (a.lifespan != b.lifespan) return a.lifespan > b.lifespan;
    return a.birth > b.birth;
  });
  return intervals;
}

}  // namespace morse
