// Acceptance suite: runs every release criterion over a fixed-seed corpus
// and prints one verdict line per criterion. Exit status 0 only if all
// criteria hold.

#include <chrono>
#include <iostream>
#include <sstream>
#include <vector>

#include "cft3m/cli.hpp"
#include "oracles.hpp"

using namespace cft3m;
namespace oracle = cft3m::testing;

namespace {

constexpr std::uint64_t kCorpusSeed = 1729;
constexpr std::size_t kStandardInstances = 1000;
constexpr std::size_t kCustomInstances = 200;
constexpr std::size_t kSnfMatrices = 10000;

struct Criterion {
    int number;
    std::string label;
    bool pass = true;
    std::size_t checks = 0;
    double seconds = 0.0;
    double budget_seconds = 0.0; // 0 = no budget
    std::string detail;

    void fail(const std::string& why) {
        if (pass) detail = why;
        pass = false;
    }
};

class Stopwatch {
  public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(
                   std::chrono::steady_clock::now() - start_)
            .count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

void finish(Criterion& c, const Stopwatch& watch) {
    c.seconds = watch.seconds();
    if (c.budget_seconds > 0 && c.seconds > c.budget_seconds) {
        std::ostringstream os;
        os << "runtime " << c.seconds << " s exceeds budget "
           << c.budget_seconds << " s";
        c.fail(os.str());
    }
}

void print(const Criterion& c) {
    std::ostringstream os;
    os << "criterion " << c.number << " [" << c.label << "]: "
       << (c.pass ? "PASS" : "FAIL") << " (" << c.checks << " checks, "
       << c.seconds << " s";
    if (!c.detail.empty()) os << "; " << c.detail;
    os << ")";
    std::cout << os.str() << std::endl;
}

std::string describe(const CorpusInstance& inst) { return inst.id; }

} // namespace

int main() {
    const CorpusOptions opt;

    // shared corpus: 1000 standard coverings + 200 with random surjections
    Rng corpus_rng(kCorpusSeed);
    std::vector<CorpusInstance> standard, custom;
    standard.reserve(kStandardInstances);
    custom.reserve(kCustomInstances);
    for (std::size_t i = 0; i < kStandardInstances; ++i)
        standard.push_back(random_instance(corpus_rng, opt, true, i));
    for (std::size_t i = 0; i < kCustomInstances; ++i)
        custom.push_back(random_instance(corpus_rng, opt, false, i));

    std::vector<Criterion> criteria;

    // 1: linking-number decomposition degree (3.2), three-way agreement
    // 2: degree factorization n = e f r (3.1) on the same corpus
    {
        Criterion c1{1, "linking-degree agreement, 3.2"};
        c1.budget_seconds = 60.0;
        Criterion c2{2, "degree factorization n=efr, 3.1"};
        Stopwatch watch;
        for (const auto& inst : standard) {
            const auto& moduli = inst.spec.standard_moduli();
            for (std::size_t k = 0; k < inst.ctx.size(); ++k) {
                const auto split = splitting_data(inst.ctx, inst.spec, k);
                if (split.e * split.f * split.r != split.n) {
                    c2.fail("n != efr at " + describe(inst));
                }
                ++c2.checks;
                if (inst.spec.branch().contains(k)) continue;
                std::vector<Int> lk_row;
                for (std::size_t b : inst.spec.branch().indices())
                    lk_row.push_back(inst.ctx.lk(k, b));
                const Int via_linking =
                    splitting_degree_via_linking(lk_row, moduli);
                const Int brute =
                    oracle::residue_order_bruteforce(lk_row, moduli);
                if (split.e != 1 || split.f != via_linking ||
                    via_linking != brute) {
                    c1.fail("degree mismatch at " + describe(inst) +
                            " knot " + inst.ctx.name(k));
                }
                ++c1.checks;
            }
        }
        for (const auto& inst : custom) {
            for (std::size_t k = 0; k < inst.ctx.size(); ++k) {
                const auto split = splitting_data(inst.ctx, inst.spec, k);
                if (split.e * split.f * split.r != split.n)
                    c2.fail("n != efr at " + describe(inst));
                ++c2.checks;
            }
        }
        finish(c1, watch);
        c2.seconds = c1.seconds;
        print(c1);
        print(c2);
        criteria.push_back(c1);
        criteria.push_back(c2);
    }

    // 3: unit + principal decomposition is exact (5.8)
    {
        Criterion c{3, "unit+principal decomposition, 5.8"};
        Stopwatch watch;
        Rng rng(kCorpusSeed + 3);
        std::size_t ideles = 0;
        const auto exercise = [&](const CorpusInstance& inst) {
            Idele a = Idele::zero(inst.ctx);
            for (auto& comp : a.components) {
                comp.q = rng.uniform(-10, 10);
                comp.p = rng.uniform(-10, 10);
            }
            const auto split = split_unit_principal(inst.ctx, a);
            bool ok = is_unit(split.unit) &&
                      is_principal(inst.ctx, split.principal);
            for (std::size_t k = 0; ok && k < inst.ctx.size(); ++k)
                ok = split.unit.components[k].q +
                             split.principal.components[k].q ==
                         a.components[k].q &&
                     split.unit.components[k].p +
                             split.principal.components[k].p ==
                         a.components[k].p;
            if (!ok) c.fail("split not exact at " + describe(inst));
            ++ideles;
            if (!unit_principal_cokernel(inst.ctx).is_trivial())
                c.fail("nontrivial cokernel at " + describe(inst));
            ++c.checks;
        };
        for (const auto& inst : standard) exercise(inst);
        for (const auto& inst : custom) exercise(inst);
        if (ideles < 1000) c.fail("fewer than 1000 random ideles");
        finish(c, watch);
        print(c);
        criteria.push_back(c);
    }

    // 4: reciprocity isomorphism (5.9 / the product-of-cyclic examples)
    {
        Criterion c{4, "reciprocity isomorphism, 5.9"};
        c.budget_seconds = 120.0;
        Stopwatch watch;
        for (const auto& inst : standard) {
            const auto report = verify_reciprocity_iso(inst.ctx, inst.spec);
            const auto expected =
                abelian_group_from_moduli(inst.moduli).group;
            if (!report.pass ||
                report.lhs_factors != expected.invariant_factors())
                c.fail("standard instance failed: " + describe(inst));
            ++c.checks;
            if (inst.ctx.size() <= 4) {
                const auto instance =
                    reciprocity_instance(inst.ctx, inst.spec);
                const auto count = oracle::coset_count_bfs(
                    2 * inst.ctx.size(), instance.relation_lattice);
                if (!count || Int(*count) != inst.spec.target().order())
                    c.fail("coset enumeration mismatch: " + describe(inst));
                ++c.checks;
            }
        }
        std::size_t custom_checked = 0;
        for (const auto& inst : custom) {
            if (inst.spec.target().order() > 64)
                c.fail("custom deck group exceeds the order bound: " +
                       describe(inst));
            if (!verify_reciprocity_iso(inst.ctx, inst.spec).pass)
                c.fail("custom instance failed: " + describe(inst));
            ++c.checks;
            ++custom_checked;
        }
        if (custom_checked < 200) c.fail("fewer than 200 custom instances");
        finish(c, watch);
        print(c);
        criteria.push_back(c);
    }

    // 5: local unramified correspondence (4.2), exact for n <= 12
    {
        Criterion c{5, "local unramified correspondence, 4.2"};
        Stopwatch watch;
        for (long long n = 1; n <= 12; ++n) {
            const auto subs = enumerate_subgroups(n);
            Int sigma = 0;
            for (long long d = 1; d <= n; ++d)
                if (n % d == 0) sigma += d;
            if (Int(subs.size()) != sigma)
                c.fail("subgroup count at index " + std::to_string(n));
            std::size_t unramified_count = 0;
            for (const auto& h : subs) {
                const auto inv = local_invariants(h);
                if (inv.e * inv.f != n)
                    c.fail("e*f != index at " + std::to_string(n));
                if (is_unramified(h)) {
                    ++unramified_count;
                    if (!(h == unramified_cover_of_degree(n)))
                        c.fail("wrong unramified subgroup at " +
                               std::to_string(n));
                }
                ++c.checks;
            }
            if (unramified_count != 1)
                c.fail("unramified count != 1 at " + std::to_string(n));
        }
        finish(c, watch);
        print(c);
        criteria.push_back(c);
    }

    // 6: decomposition behavior consistency (5.11)
    {
        Criterion c{6, "decomposition behavior consistency, 5.11"};
        Stopwatch watch;
        const auto exercise = [&](const CorpusInstance& inst) {
            for (std::size_t k = 0; k < inst.ctx.size(); ++k) {
                const auto behavior = knot_behavior(inst.ctx, inst.spec, k);
                const auto split = splitting_data(inst.ctx, inst.spec, k);
                bool ok = behavior.unbranched == (split.e == 1) &&
                          behavior.completely_decomposed ==
                              (split.e == 1 && split.f == 1);
                if (ok && !inst.spec.branch().contains(k))
                    ok = behavior.completely_decomposed ==
                         is_completely_decomposed(inst.ctx, inst.spec, k);
                if (!ok)
                    c.fail("behavior mismatch at " + describe(inst) +
                           " knot " + inst.ctx.name(k));
                ++c.checks;
            }
        };
        for (const auto& inst : standard) exercise(inst);
        for (const auto& inst : custom) exercise(inst);
        finish(c, watch);
        print(c);
        criteria.push_back(c);
    }

    // 7: Smith normal form soundness
    {
        Criterion c{7, "Smith normal form soundness"};
        c.budget_seconds = 30.0;
        Stopwatch watch;
        std::mt19937_64 eng(kCorpusSeed + 7);
        for (std::size_t iter = 0; iter < kSnfMatrices; ++iter) {
            const std::size_t rows = oracle::rand_range(eng, 1, 5);
            const std::size_t cols = oracle::rand_range(eng, 1, 5);
            const IntMatrix m = oracle::random_matrix(eng, rows, cols, -9, 9);
            const auto s = smith_normal_form(m);
            bool ok = s.U * m * s.V == s.D;
            ok = ok &&
                 boost::multiprecision::abs(oracle::det_cofactor(s.U)) == 1;
            ok = ok &&
                 boost::multiprecision::abs(oracle::det_cofactor(s.V)) == 1;
            const std::size_t diag = std::min(rows, cols);
            for (std::size_t i = 0; ok && i < diag; ++i) {
                ok = s.D.at(i, i) >= 0;
                if (ok && i + 1 < diag) {
                    if (s.D.at(i, i) == 0)
                        ok = s.D.at(i + 1, i + 1) == 0;
                    else
                        ok = s.D.at(i + 1, i + 1) % s.D.at(i, i) == 0;
                }
            }
            for (std::size_t i = 0; ok && i < rows; ++i)
                for (std::size_t j = 0; j < cols; ++j)
                    if (i != j && s.D.at(i, j) != 0) ok = false;
            if (ok && rows == cols) {
                Int prod = 1;
                for (std::size_t i = 0; i < diag; ++i) prod *= s.D.at(i, i);
                ok = prod ==
                     boost::multiprecision::abs(oracle::det_cofactor(m));
            }
            if (!ok) c.fail("violation at matrix " + std::to_string(iter));
            ++c.checks;
        }
        finish(c, watch);
        print(c);
        criteria.push_back(c);
    }

    std::size_t passed = 0;
    for (const auto& c : criteria) passed += c.pass ? 1 : 0;
    std::cout << "ACCEPTANCE: " << passed << "/" << criteria.size()
              << " criteria passed" << std::endl;
    return passed == criteria.size() ? 0 : 1;
}
