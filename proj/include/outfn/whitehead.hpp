#pragma once

#include <vector>

#include "outfn/autom.hpp"

namespace outfn {

/// An automorphism together with its inverse.
struct InvertiblePair {
  Endo forward;
  Endo inverse;
};

/// All 2^n n! permutations of the basis combined with letter inversions.
std::vector<InvertiblePair> rose_symmetries(int rank);

/// Nontrivial Whitehead automorphisms of the second kind: a fixed letter m,
/// every other basis letter x sent to one of x, xm, m^-1 x, m^-1 x m.
std::vector<InvertiblePair> whitehead_multipliers(int rank);

/// Rose symmetries followed by whitehead_multipliers.
std::vector<InvertiblePair> whitehead_automorphisms(int rank);

/// Inverse of an automorphism, found by peak reduction: length-reducing
/// Whitehead moves bring the images down to a signed permutation of the
/// basis. Throws NotAnAutomorphism if the reduction gets stuck.
Endo inverse_automorphism(const Endo &phi);

OuterAut invert(const OuterAut &phi);

} // namespace outfn
