#pragma once

#include "admit/policy.hpp"

#include <cstddef>

namespace admit {

// Layout of the underwriting meaning space.
//   dims 0..2   numeric feature axes (ltv, fico, dti)
//   dims 3..8   three categorical planes (property type, occupancy, purpose)
//   dims 9..20  one nuisance plane per fact
inline constexpr std::size_t kFeatureDim = 21;
inline constexpr std::size_t kLtvAxis = 0;
inline constexpr std::size_t kFicoAxis = 1;
inline constexpr std::size_t kDtiAxis = 2;
inline constexpr std::size_t kCategoricalPlane = 3;
inline constexpr std::size_t kNuisancePlane = 9;
inline constexpr std::size_t kFactCount = 6;

// Readouts are oriented so that a larger projection is more favourable for
// the lender: LTV and DTI fall, FICO rises.
struct AxisReadout {
    const char* id;
    std::size_t axis;
    double scale;
    double offset;
    double resolution;
};

inline constexpr AxisReadout kLtvReadout{"ltv", kLtvAxis, -3.75, 1.5, 1e-4};
inline constexpr AxisReadout kFicoReadout{"fico", kFicoAxis, 1100.0, 300.0, 1.0};
inline constexpr AxisReadout kDtiReadout{"dti", kDtiAxis, -2.5, 1.0, 1e-3};

ExtractorRegistry default_extractors();

}  // namespace admit
