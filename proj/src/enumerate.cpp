#include "rulemon/enumerate.hpp"

#include <array>

namespace rulemon {

namespace {

constexpr std::array<Op, 4> kUnary{Op::Next, Op::WeakNext, Op::Eventually, Op::Always};
constexpr std::array<Op, 3> kBinary{Op::Or, Op::And, Op::Until};

void leaves(const std::vector<std::string>& atoms, const std::function<void(FormulaPtr)>& fn) {
    for (const std::string& a : atoms) {
        fn(make_atom(a));
        fn(make_neg_atom(a));
    }
    fn(make_true());
    fn(make_end());
}

void gen(int nodes, const std::vector<std::string>& atoms,
         const std::function<void(FormulaPtr)>& fn) {
    if (nodes < 1) return;
    if (nodes == 1) {
        leaves(atoms, fn);
        return;
    }
    for (Op u : kUnary)
        gen(nodes - 1, atoms, [&](FormulaPtr child) { fn(make_unary(u, std::move(child))); });
    for (Op b : kBinary)
        for (int k = 1; k <= nodes - 2; ++k)
            gen(k, atoms, [&](FormulaPtr l) {
                const Formula& left = *l;
                gen(nodes - 1 - k, atoms, [&](FormulaPtr r) {
                    fn(make_binary(b, clone(left), std::move(r)));
                });
            });
}

}  // namespace

void enumerate_formulas(int nodes, const std::vector<std::string>& atoms,
                        const std::function<void(const Formula&)>& fn) {
    gen(nodes, atoms, [&](FormulaPtr f) { fn(*f); });
}

void enumerate_formulas_up_to(int max_nodes, const std::vector<std::string>& atoms,
                              const std::function<void(const Formula&)>& fn) {
    for (int n = 1; n <= max_nodes; ++n) enumerate_formulas(n, atoms, fn);
}

long long count_formulas(int nodes, int n_literals) {
    // literals: n atoms plus their negations plus true and END
    std::vector<long long> c(static_cast<std::size_t>(nodes) + 1, 0);
    if (nodes >= 1) c[1] = 2LL * n_literals + 2;
    for (int n = 2; n <= nodes; ++n) {
        long long total = 4 * c[static_cast<std::size_t>(n - 1)];
        for (int k = 1; k <= n - 2; ++k)
            total += 3 * c[static_cast<std::size_t>(k)] * c[static_cast<std::size_t>(n - 1 - k)];
        c[static_cast<std::size_t>(n)] = total;
    }
    return c[static_cast<std::size_t>(nodes)];
}

void enumerate_traces(int length, const std::vector<std::string>& alphabet,
                      const std::function<void(const Trace&)>& fn) {
    const unsigned n_subsets = 1u << alphabet.size();
    Trace trace;
    trace.cells.resize(static_cast<std::size_t>(length));
    std::vector<unsigned> digits(static_cast<std::size_t>(length), 0);
    while (true) {
        for (int c = 0; c < length; ++c) {
            Cell& cell = trace.cells[static_cast<std::size_t>(c)];
            cell.observations.clear();
            for (std::size_t b = 0; b < alphabet.size(); ++b)
                if (digits[static_cast<std::size_t>(c)] & (1u << b))
                    cell.observations.push_back(alphabet[b]);
        }
        fn(trace);
        int d = length - 1;
        while (d >= 0 && digits[static_cast<std::size_t>(d)] == n_subsets - 1) {
            digits[static_cast<std::size_t>(d)] = 0;
            --d;
        }
        if (d < 0) break;
        ++digits[static_cast<std::size_t>(d)];
    }
}

FormulaPtr gen_random_formula(int nodes, const std::vector<std::string>& atoms,
                              std::mt19937_64& rng) {
    if (nodes <= 1) {
        std::uniform_int_distribution<std::size_t> pick(0, atoms.size() * 2 + 1);
        std::size_t i = pick(rng);
        if (i < atoms.size()) return make_atom(atoms[i]);
        if (i < atoms.size() * 2) return make_neg_atom(atoms[i - atoms.size()]);
        return i == atoms.size() * 2 ? make_true() : make_end();
    }
    bool can_binary = nodes >= 3;
    std::uniform_int_distribution<int> arity(0, can_binary ? 6 : 3);
    int pick = arity(rng);
    if (pick < 4) {
        return make_unary(kUnary[static_cast<std::size_t>(pick)],
                          gen_random_formula(nodes - 1, atoms, rng));
    }
    Op op = kBinary[static_cast<std::size_t>(pick - 4)];
    std::uniform_int_distribution<int> split(1, nodes - 2);
    int k = split(rng);
    FormulaPtr l = gen_random_formula(k, atoms, rng);
    FormulaPtr r = gen_random_formula(nodes - 1 - k, atoms, rng);
    return make_binary(op, std::move(l), std::move(r));
}

}  // namespace rulemon
