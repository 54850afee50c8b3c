#pragma once
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

// Static random deployment on the unit square and per-power-level neighbor
// tables (unit-disk radio model).

namespace sdc {

struct Topology {
  // Column i is node i's (x, y) position.
  Eigen::Matrix2Xd positions;

  int size() const { return static_cast<int>(positions.cols()); }
};

// k positions i.i.d. uniform on [0,1]^2, one derived stream per node
// (x drawn before y). Deterministic in the root seed. Rejects k < 1.
Topology build_topology(int k, std::uint64_t root_seed);

// For each reach radius, a CSR list of in-range neighbors (ascending id,
// excluding self). Built once per run; the radio range of a transmission is
// the radius of its chosen power level.
class NeighborTables {
 public:
  NeighborTables() = default;
  NeighborTables(const Topology& topo, const std::vector<double>& radii);

  std::span<const std::int32_t> neighbors(std::size_t level, int node) const {
    const auto& off = offsets_[level];
    const auto& ids = ids_[level];
    return {ids.data() + off[node], static_cast<std::size_t>(off[node + 1] - off[node])};
  }

  std::size_t num_levels() const { return offsets_.size(); }

 private:
  std::vector<std::vector<std::int32_t>> offsets_;  // per level, size k+1
  std::vector<std::vector<std::int32_t>> ids_;      // per level, flat neighbor ids
};

}  // namespace sdc
