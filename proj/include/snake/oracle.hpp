#pragma once

#include <stdexcept>

#include "snake/grid.hpp"

namespace snake {

class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TooLarge : public OracleError {
 public:
  using OracleError::OracleError;
};

class NoCycle : public OracleError {
 public:
  using OracleError::OracleError;
};

struct OracleResult {
  int objective = 0;
  /// Starts with the snake (tail first).
  CyclePath witness;
};

inline constexpr int kOracleMaxCells = 20;

/// Exhaustive search over every Hamiltonian cycle that extends the snake.
/// TooLarge beyond kOracleMaxCells cells, NoCycle if none exists,
/// std::invalid_argument if the apple is on the snake.
OracleResult brute_force_oracle(const GridGraph& g, const Snake& snake, Coord apple);

}  // namespace snake
