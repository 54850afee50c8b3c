#include "sdcsim/topology.hpp"

#include <stdexcept>

#include "sdcsim/rng.hpp"

namespace sdc {

Topology build_topology(int k, std::uint64_t root_seed) {
  if (k < 1) throw std::invalid_argument("build_topology: node count must be >= 1");
  Topology topo;
  topo.positions.resize(2, k);
  for (int i = 0; i < k; ++i) {
    rng::Stream st = rng::topology_stream(root_seed, static_cast<std::uint64_t>(i));
    topo.positions(0, i) = st.next_unit();
    topo.positions(1, i) = st.next_unit();
  }
  return topo;
}

NeighborTables::NeighborTables(const Topology& topo, const std::vector<double>& radii) {
  const int k = topo.size();
  offsets_.resize(radii.size());
  ids_.resize(radii.size());
  for (std::size_t l = 0; l < radii.size(); ++l) {
    const double r2 = radii[l] * radii[l];
    auto& off = offsets_[l];
    auto& ids = ids_[l];
    off.assign(k + 1, 0);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) {
        if (j == i) continue;
        const double dx = topo.positions(0, i) - topo.positions(0, j);
        const double dy = topo.positions(1, i) - topo.positions(1, j);
        if (dx * dx + dy * dy <= r2) ids.push_back(j);
      }
      off[i + 1] = static_cast<std::int32_t>(ids.size());
    }
  }
}

}  // namespace sdc
