#pragma once

#include <stdexcept>
#include <string>

namespace manifold {

// Exit-code contract: 0 success, 2 usage, 3 data error, 4 numerical failure.
struct UsageError : std::runtime_error {
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
    static constexpr int exit_code = 2;
};

struct DataError : std::runtime_error {
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
    static constexpr int exit_code = 3;
};

struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
    static constexpr int exit_code = 4;
};

}  // namespace manifold
