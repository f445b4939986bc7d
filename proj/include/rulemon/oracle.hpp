// oracle.hpp — brute-force FLTL evaluation over complete finite traces.
// This is the ground truth the rule-based monitor is tested against; it is
// deliberately independent of the rule machinery.

#ifndef RULEMON_ORACLE_HPP
#define RULEMON_ORACLE_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "rulemon/formula.hpp"
#include "rulemon/trace.hpp"

namespace rulemon {

// [u,i |= f] by direct recursion on the FLTL semantics.  f must be in NNF;
// i must satisfy 0 <= i < u.length().
bool oracle_eval(const Formula& f, const Trace& u, int i);

enum class Irrevocability { AlwaysTrue, AlwaysFalse, Varies };

// Evaluates f at index 0 over every extension of the first `prefix_len`
// cells of `prefix` by 0..horizon further cells drawn from all observation
// subsets of `alphabet`.  `budget` caps the number of extensions explored.
Irrevocability oracle_irrevocable(const Formula& f, const Trace& prefix, int prefix_len,
                                  const std::vector<std::string>& alphabet, int horizon,
                                  long long budget = 2'000'000);

class OracleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace rulemon

#endif
