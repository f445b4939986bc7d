// enumerate.hpp — exhaustive and random generation of formulae and traces
// for equivalence checking.

#ifndef RULEMON_ENUMERATE_HPP
#define RULEMON_ENUMERATE_HPP

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "rulemon/formula.hpp"
#include "rulemon/trace.hpp"

namespace rulemon {

// Every NNF formula with exactly `nodes` AST nodes over the given atom
// names (literals: a, !a, true, END; unary X, W, F, G; binary |, &, U).
void enumerate_formulas(int nodes, const std::vector<std::string>& atoms,
                        const std::function<void(const Formula&)>& fn);

// All of the above for 1..max_nodes.
void enumerate_formulas_up_to(int max_nodes, const std::vector<std::string>& atoms,
                              const std::function<void(const Formula&)>& fn);

long long count_formulas(int nodes, int n_literals);

// All traces of the given length over observation subsets of `alphabet`.
void enumerate_traces(int length, const std::vector<std::string>& alphabet,
                      const std::function<void(const Trace&)>& fn);

// Uniform-ish random NNF formula with exactly `nodes` nodes.
FormulaPtr gen_random_formula(int nodes, const std::vector<std::string>& atoms,
                              std::mt19937_64& rng);

}  // namespace rulemon

#endif
