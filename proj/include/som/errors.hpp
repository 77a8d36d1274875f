#pragma once

#include <stdexcept>
#include <string>

namespace som {

// Malformed or inconsistent input data (treebanks, corpora, configs, suites).
struct DataError : std::runtime_error {
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// NaN/Inf or an invalid numeric state produced at runtime.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// An operation was called outside its contract; indicates a bug in the caller.
struct ContractError : std::logic_error {
  explicit ContractError(const std::string& msg) : std::logic_error(msg) {}
};

}  // namespace som
