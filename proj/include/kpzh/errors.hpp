// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace kpzh {

enum class Errc {
    NonAlignedBounds,
    DegenerateGrid,
    OffGrid,
    DomainExceeded,
    WindowTooSmall,
    EmptyRange,
    DriftGapViolated,
    TailTooHeavy,
    QuadratureNonconvergent,
    TooLarge,
    OrderViolated,
    TooFewSamples,
    DomainError,
    Precondition,
};

const char* errc_name(Errc c) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, Errc code, const std::string& what) {
    if (!ok) fail(code, what);
}

}  // namespace kpzh
