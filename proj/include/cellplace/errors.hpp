#pragma once

#include <stdexcept>
#include <string>

namespace cellplace {

struct UnknownRatingLetter : std::runtime_error {
  explicit UnknownRatingLetter(char c)
      : std::runtime_error(std::string("unknown closeness rating letter '") + c + "'") {}
};

struct DegenerateMatrix : std::runtime_error {
  DegenerateMatrix() : std::runtime_error("matrix grand total is zero, cannot normalize") {}
};

struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_, const std::string& reason)
      : std::runtime_error("line " + std::to_string(line_) + ": " + reason), line(line_) {}
};

struct DimensionMismatch : std::runtime_error {
  DimensionMismatch(std::size_t got, std::size_t want)
      : std::runtime_error("dimension mismatch: got " + std::to_string(got) +
                           ", expected " + std::to_string(want)) {}
};

struct InvalidPermutation : std::runtime_error {
  explicit InvalidPermutation(const std::string& reason)
      : std::runtime_error("invalid permutation: " + reason) {}
};

struct IndexOutOfRange : std::runtime_error {
  IndexOutOfRange(int idx, int n)
      : std::runtime_error("index " + std::to_string(idx) + " out of range [0, " +
                           std::to_string(n) + ")") {}
};

struct SameIndex : std::runtime_error {
  explicit SameIndex(int idx)
      : std::runtime_error("swap indices are both " + std::to_string(idx)) {}
};

struct InstanceTooLarge : std::runtime_error {
  explicit InstanceTooLarge(int n)
      : std::runtime_error("n = " + std::to_string(n) +
                           " exceeds the exhaustive-search limit of 10; pass force to override") {}
};

struct InvalidParams : std::runtime_error {
  explicit InvalidParams(const std::string& reason)
      : std::runtime_error("invalid solver parameters: " + reason) {}
};

struct InvalidGeneratorArgs : std::runtime_error {
  explicit InvalidGeneratorArgs(const std::string& reason)
      : std::runtime_error("invalid generator arguments: " + reason) {}
};

}  // namespace cellplace
