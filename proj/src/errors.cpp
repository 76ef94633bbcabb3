// SPDX-License-Identifier: Apache-2.0
#include "kpzh/errors.hpp"

namespace kpzh {

const char* errc_name(Errc c) noexcept {
    switch (c) {
        case Errc::NonAlignedBounds: return "NonAlignedBounds";
        case Errc::DegenerateGrid: return "DegenerateGrid";
        case Errc::OffGrid: return "OffGrid";
        case Errc::DomainExceeded: return "DomainExceeded";
        case Errc::WindowTooSmall: return "WindowTooSmall";
        case Errc::EmptyRange: return "EmptyRange";
        case Errc::DriftGapViolated: return "DriftGapViolated";
        case Errc::TailTooHeavy: return "TailTooHeavy";
        case Errc::QuadratureNonconvergent: return "QuadratureNonconvergent";
        case Errc::TooLarge: return "TooLarge";
        case Errc::OrderViolated: return "OrderViolated";
        case Errc::TooFewSamples: return "TooFewSamples";
        case Errc::DomainError: return "DomainError";
        case Errc::Precondition: return "Precondition";
    }
    return "Unknown";
}

}  // namespace kpzh
