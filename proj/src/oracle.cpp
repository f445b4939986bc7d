#include "rulemon/oracle.hpp"

namespace rulemon {

bool oracle_eval(const Formula& f, const Trace& u, int i) {
    const int n = u.length();
    if (i < 0 || i >= n) throw OracleError("oracle_eval: index out of range");
    switch (f.op) {
        case Op::True: return true;
        case Op::End: return i == n - 1;
        case Op::Atom: return u.cells[static_cast<std::size_t>(i)].contains(f.atom);
        case Op::NegAtom: return !u.cells[static_cast<std::size_t>(i)].contains(f.atom);
        case Op::Or: return oracle_eval(f.left(), u, i) || oracle_eval(f.right(), u, i);
        case Op::And: return oracle_eval(f.left(), u, i) && oracle_eval(f.right(), u, i);
        case Op::Next: return i + 1 < n ? oracle_eval(f.left(), u, i + 1) : false;
        case Op::WeakNext: return i + 1 < n ? oracle_eval(f.left(), u, i + 1) : true;
        case Op::Until:
            for (int k = i; k < n; ++k) {
                if (oracle_eval(f.right(), u, k)) return true;
                if (!oracle_eval(f.left(), u, k)) return false;
            }
            return false;
        case Op::Eventually:
            for (int k = i; k < n; ++k)
                if (oracle_eval(f.left(), u, k)) return true;
            return false;
        case Op::Always:
            for (int k = i; k < n; ++k)
                if (!oracle_eval(f.left(), u, k)) return false;
            return true;
        case Op::Not:
            throw OracleError("oracle_eval: formula not in NNF");
    }
    throw OracleError("oracle_eval: corrupt formula node");
}

namespace {

// Enumerates observation subsets of `alphabet` into `cell`.
void subset_cell(const std::vector<std::string>& alphabet, unsigned mask, Cell& cell) {
    cell.observations.clear();
    for (std::size_t b = 0; b < alphabet.size(); ++b)
        if (mask & (1u << b)) cell.observations.push_back(alphabet[b]);
}

}  // namespace

Irrevocability oracle_irrevocable(const Formula& f, const Trace& prefix, int prefix_len,
                                  const std::vector<std::string>& alphabet, int horizon,
                                  long long budget) {
    if (prefix_len < 0 || prefix_len > prefix.length())
        throw OracleError("oracle_irrevocable: bad prefix length");
    if (alphabet.size() > 20) throw OracleError("oracle_irrevocable: alphabet too large");

    const unsigned n_subsets = 1u << alphabet.size();
    Trace work;
    work.cells.assign(prefix.cells.begin(), prefix.cells.begin() + prefix_len);

    bool seen_true = false;
    bool seen_false = false;
    long long used = 0;

    // extension length 0..horizon; cells indexed in base n_subsets
    for (int ext = 0; ext <= horizon; ++ext) {
        work.cells.resize(static_cast<std::size_t>(prefix_len + ext));
        std::vector<unsigned> digits(static_cast<std::size_t>(ext), 0);
        while (true) {
            if (work.length() >= 1) {
                if (++used > budget)
                    throw OracleError("oracle_irrevocable: combinatorial budget exceeded");
                for (int c = 0; c < ext; ++c)
                    subset_cell(alphabet, digits[static_cast<std::size_t>(c)],
                                work.cells[static_cast<std::size_t>(prefix_len + c)]);
                (oracle_eval(f, work, 0) ? seen_true : seen_false) = true;
                if (seen_true && seen_false) return Irrevocability::Varies;
            }
            // next assignment
            int d = ext - 1;
            while (d >= 0 && digits[static_cast<std::size_t>(d)] == n_subsets - 1) {
                digits[static_cast<std::size_t>(d)] = 0;
                --d;
            }
            if (d < 0) break;
            ++digits[static_cast<std::size_t>(d)];
        }
    }
    if (seen_true && !seen_false) return Irrevocability::AlwaysTrue;
    if (seen_false && !seen_true) return Irrevocability::AlwaysFalse;
    return Irrevocability::Varies;  // empty enumeration: nothing is invariant
}

}  // namespace rulemon
