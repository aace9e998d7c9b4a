#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cstddef>
#include <exception>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace fracmax {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Index = Eigen::Index;
using PointSet = std::vector<Index>;

/// Base class for every error the library raises. The CLI maps each subclass
/// to its own exit code.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A parameter lies outside the window an operation requires.
class ValidationError : public Error {
public:
  using Error::Error;
};

/// An index or distance falls outside a covered range.
class RangeError : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

/// Input file is readable but malformed.
class ParseError : public Error {
public:
  using Error::Error;
};

class SolverError : public Error {
public:
  using Error::Error;
};

/// Reference mode runs every loop sequentially in index order; parallel mode
/// splits per-point loops across threads. Per-point results never depend on
/// the split, so both modes produce identical values.
enum class Execution { Reference, Parallel };

template <typename Fn>
void parallel_for(Index n, Fn&& fn, Execution mode = Execution::Reference) {
  const unsigned hw = std::max(2u, std::thread::hardware_concurrency());
  if (mode == Execution::Reference || n < 2) {
    for (Index i = 0; i < n; ++i) fn(i);
    return;
  }
  const Index workers = std::min<Index>(hw, n);
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  pool.reserve(static_cast<std::size_t>(workers));
  for (Index w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (Index i = w; i < n; i += workers) fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw ValidationError(msg);
}

}  // namespace fracmax
