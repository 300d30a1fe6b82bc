#pragma once

#include <string>

#include "bcp/geometry.hpp"

namespace bcp {

struct InstanceSpec {
    std::vector<Point2> points;       // ids 0..m-1
    std::vector<RangeRegion> ranges;  // ids 0..n-1
    uint64_t seed = 0;
    std::string generator;
};

// kinds: uniform-disks, uniform-halfplanes, annuli, parabolic, clustered,
// adversarial-lenses, boolean-mix
InstanceSpec generate_instance(const std::string& kind, int m, int n, uint64_t seed);

std::string instance_to_json(const InstanceSpec& inst);
InstanceSpec instance_from_json(const std::string& text);

}  // namespace bcp
