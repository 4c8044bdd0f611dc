#pragma once

#include <vector>

#include "awbm/affine_weyl.hpp"

// Deliberately naive reference implementations used to certify the main
// algorithms. Every entry point refuses instances above a length budget.
namespace awbm::oracle {

// Largest admissible length budget for rank n.
int max_budget(int n);

// Closed-form length of t_nu o w summed over positive roots.
int length(const WeylElement& a);

// a <= b via products of all subwords of one reduced word of b.
bool bruhat(const WeylElement& a, const WeylElement& b);

// a up b via breadth-first search along upward affine reflections, inside
// the alcoves at separating distance at most budget from both endpoints.
bool up(const WeylElement& a, const WeylElement& b, int budget);

// All elements of the given degree and length at most budget, canonically sorted.
std::vector<WeylElement> enumerate(int n, Int degree, int budget);

}  // namespace awbm::oracle
