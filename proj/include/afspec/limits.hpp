#pragma once

#include <cstddef>

namespace afspec {

/// Size guards for the exponential enumerations.  All of them can be
/// overridden from the command line.
struct Limits {
  std::size_t closed_sets = 20;     // elements, for up-set enumeration
  std::size_t automorphisms = 12;   // elements, for permutation search
  std::size_t period_nodes = 16;    // nodes in one diagram period
  std::size_t simplices = 200000;   // order-complex size
  std::size_t truncation_depth = 8; // levels used for tree-like diagrams
};

}  // namespace afspec
