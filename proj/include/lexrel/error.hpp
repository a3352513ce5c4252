#pragma once

#include <stdexcept>
#include <string>

namespace lexrel {

// Malformed input data: corpus, embedding, dataset or model files.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller broke an operation's precondition (shape mismatch, empty path, ...).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace lexrel
