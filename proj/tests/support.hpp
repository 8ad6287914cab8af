#pragma once

#include <doctest.h>

#include <complex>
#include <functional>
#include <optional>

#include "arcweave/error.hpp"

namespace test {

/// Code of the arcweave::Error raised by `f`, or nullopt when it returns.
inline std::optional<arcweave::ErrorCode> error_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const arcweave::Error& e) {
        return e.code();
    }
    return std::nullopt;
}

inline bool near(std::complex<double> a, std::complex<double> b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace test

#define CHECK_ERROR(expr, code_) CHECK(test::error_of([&] { (void)(expr); }) == arcweave::ErrorCode::code_)
