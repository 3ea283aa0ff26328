#pragma once

#include <cstdint>
#include <vector>

#include "gpm/error.hpp"
#include "gpm/types.hpp"

namespace gpm {

// Total vertex -> partition map.
struct Assignment {
  std::vector<PartitionId> parts;
  std::uint32_t partition_count = 0;

  void validate() const {
    if (partition_count == 0) throw ConfigError("partition count must be >= 1");
    for (PartitionId p : parts) {
      if (p >= partition_count) {
        throw ConfigError("assignment references partition " +
                          std::to_string(p) + " but P=" +
                          std::to_string(partition_count));
      }
    }
  }

  bool operator==(const Assignment&) const = default;
};

}  // namespace gpm
