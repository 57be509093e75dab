#pragma once

#include "morse/types.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace morse {

struct Cell {
  std::size_t id = 0;
  int dim = 0;
  double density = 0.0;
  std::vector<std::size_t> boundary;  // ids of faces, each of dimension dim - 1
  std::vector<Vector> geometry;       // point, band nodes, or sheet nodes
};

struct FiltrationMetadata {
  double sigma = 0.0;
  std::uint64_t seed = 0;
  std::string config_hash;
};

/// Density-graded cell complex. Cells are held in filtration order: density
/// descending, then dimension ascending, so every prefix above a threshold is
/// closed under faces. Ids equal positions in that order.
class MorseFiltration {
public:
  MorseFiltration() = default;

  /// Validates faces (existence, dimension), clamps each density to at most
  /// the minimum of its faces, sorts and renumbers. The boundary ids of the
  /// input refer to the input ids. Throws InvalidComplex on bad faces.
  static MorseFiltration build(std::vector<Cell> cells);

  const std::vector<Cell>& cells() const noexcept { return cells_; }
  const Cell& cell(std::size_t id) const { return cells_.at(id); }
  std::size_t size() const noexcept { return cells_.size(); }

  /// Distinct cell densities, descending.
  std::vector<double> critical_values() const;

  FiltrationMetadata metadata;

private:
  std::vector<Cell> cells_;
};

/// Ids of the cells with density >= a, ascending.
std::vector<std::size_t> superlevel_complex(const MorseFiltration& filtration, double a);

struct Betti {
  std::size_t b0 = 0;
  std::size_t b1 = 0;
  friend bool operator==(const Betti&, const Betti&) = default;
};

/// Betti numbers over GF(2) of the subcomplex given by `ids`. Throws
/// InvalidComplex when a face of a listed cell is missing from the set.
Betti betti(const MorseFiltration& filtration, const std::vector<std::size_t>& ids);

/// Betti numbers of Z^a.
Betti betti_at(const MorseFiltration& filtration, double a);

struct CellCounts {
  std::size_t vertices = 0;
  std::size_t edges = 0;
  std::size_t faces = 0;
};

CellCounts count_cells(const MorseFiltration& filtration, const std::vector<std::size_t>& ids);

struct PersistenceInterval {
  double birth = 0.0;  // density of the 1-cell closing the loop
  double death = 0.0;  // density of the 2-cell filling it, 0 if never filled
  double lifespan = 0.0;
  std::size_t birth_cell = 0;
  std::optional<std::size_t> death_cell;
};

/// One-dimensional persistence pairs over the filtration order, longest first.
std::vector<PersistenceInterval> loop_persistence(const MorseFiltration& filtration);

}  // namespace morse
