#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fedmap {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixF = Matrix<float>;
using VectorF = Vector<float>;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad configuration, arguments, or precondition violations. CLI exit code 1.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Tensor/grid dimension mismatches.
class ShapeError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// Non-finite values encountered during computation.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Malformed input files; message carries a byte offset where known.
class ParseError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// FNV-1a 64-bit hash, used for sub-stream seeding and artifact fingerprints.
inline std::uint64_t fnv1a64(const void* data, std::size_t n,
                             std::uint64_t h = 1469598103934665603ULL) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= bytes[i];
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::uint64_t fnv1a64(std::string_view s) {
    return fnv1a64(s.data(), s.size());
}

/// Runs fn(0..n-1) on up to `jobs` worker threads. Each index is processed
/// exactly once; callers store results by index so the outcome does not
/// depend on scheduling.
void parallel_for(int n, int jobs, const std::function<void(int)>& fn);

/// Shortest text that round-trips the double exactly ("%.17g"); +infinity
/// prints as "inf". Used for all CSV output.
std::string format_double(double v);

}  // namespace fedmap
