#include "expsplit/splitcat.hpp"

#include "expsplit/padetaylor.hpp"

#include <cmath>
#include <map>

namespace expsplit {

namespace {

const Complex kI(0.0, 1.0);

Catalog build_catalog() {
    Catalog cat;

    auto squaring = [](std::string id, int s1, std::vector<Complex> a, double beta, double gamma,
                       int pade, int p1, int p2, bool real_only) {
        SquaringScheme s;
        s.id = std::move(id);
        s.s1 = s1;
        s.a = std::move(a);
        s.center = {Complex(std::pow(0.5, s1)), beta, gamma, pade};
        s.p1 = p1;
        s.p2 = p2;
        s.real_only = real_only;
        return s;
    };

    cat.squarings.push_back(squaring("strang", 0, {0.5}, 0, 0, 2, 2, 2, true));

    {
        const double a2 = (3.0 - std::sqrt(3.0)) / 6.0;
        cat.squarings.push_back(squaring("Y1_42", 1, {1.0 - 2.0 * a2, a2}, 0, 0, 2, 4, 2, true));
    }
    {
        const double a1 = std::sqrt((5.0 - std::sqrt(5.0)) / 30.0);
        const double a2 = std::sqrt((5.0 - 2.0 * std::sqrt(5.0)) / 15.0);
        cat.squarings.push_back(
            squaring("Y2_62", 2, {a1, a2, (1.0 - 2.0 * a1 - a2) / 2.0}, 0, 0, 2, 6, 2, true));
    }
    {
        const Complex a2 = 2.0 * (2.0 + kI) / 15.0;
        const Complex a3 = (1.0 - kI / 3.0) / 10.0;
        cat.squarings.push_back(
            squaring("Y2c_44", 2, {a2, 1.0 - 2.0 * (a3 + a2), a3}, 0, 0, 4, 4, 4, false));
    }
    {
        const double a1 = 0.153942020841153420134790213164;
        const double a2 = 0.089999237645462605679630986655;
        const double a3 = 0.102244554291437558627161030779;
        cat.squarings.push_back(squaring(
            "Y3_82", 3, {a1, a2, a3, 0.5 - (4.0 * a1 + 2.0 * a2 + a3) / 2.0}, 0, 0, 2, 8, 2, true));
    }
    {
        const Complex a1(0.13534452760420860194, 0.06201309787740406230);
        const Complex a2(0.13027125534284511606, -0.10310039626441585374);
        const Complex a3(0.099062332740825337251, -0.015885424766237390724);
        cat.squarings.push_back(squaring(
            "Y3_64", 3, {a1, a2, a3, 0.5 - (4.0 * a1 + 2.0 * a2 + a3) / 2.0}, 0, 0, 4, 6, 4,
            false));
    }
    {
        const double a1 = 0.077255933048297137202077893145;
        const double a2 = 0.0444926322393204245189059370354;
        const double a3 = 0.051080773613693429438027986467;
        const double a5 = 0.0254553659841308990458390646508;
        const double a4 = 1.0 - 8.0 * a1 - 4.0 * a2 - 2.0 * a3 - 2.0 * a5;
        cat.squarings.push_back(squaring("Y4_102", 4, {a1, a2, a3, a4, a5}, 0, 0, 2, 10, 2, true));
    }
    {
        const Complex a1(0.06782965853562196485274129, 0.03038453954138687801299186);
        const Complex a2(0.06477414774829711915884478, -0.05170904068177844632921239);
        const Complex a3(0.04963134399080347125041612, -0.00584283681423207753349501);
        const Complex a5(0.02474856149827627051056177, -0.00610084851840072905292033);
        const Complex a4 = 1.0 - 8.0 * a1 - 4.0 * a2 - 2.0 * a3 - 2.0 * a5;
        cat.squarings.push_back(squaring("Y4_84", 4, {a1, a2, a3, a4, a5}, 0, 0, 4, 8, 4, false));
    }

    cat.squarings.push_back(squaring("Yt0_62", 0, {0.5}, 1.0 / 24.0, 1.0 / 1920.0, 2, 6, 2, true));
    cat.squarings.push_back(
        squaring("Yt1_64", 1, {2.0 / 3.0, 1.0 / 6.0}, -1.0 / 144.0, 121.0 / 311040.0, 4, 6, 4,
                 true));
    {
        const double a1 = 0.47071989362081947165;
        const double a3 = 0.04898669326146179875;
        cat.squarings.push_back(squaring("Yt2_64", 2, {a1, 1.0 - 2.0 * a1 - 2.0 * a3, a3},
                                         -0.002320917859694561351, 0.0000329546718228203782, 4, 6,
                                         4, true));
    }
    {
        const double a1 = 0.3602258146389491220734647;
        const double a3 = 0.0766102130069293861483005;
        cat.squarings.push_back(squaring("Yt2_84", 2, {a1, 1.0 - 2.0 * a1 - 2.0 * a3, a3},
                                         -0.00103637077918270398691258,
                                         0.000010240482532598594411391, 4, 8, 4, true));
    }

    auto dstage = [](Complex c) { return SplitStage{SplitStage::Op::D, c, 0}; };
    auto bstage = [](int idx) { return SplitStage{SplitStage::Op::B, Complex(0.0), idx}; };
    auto gstage = [](int idx) { return SplitStage{SplitStage::Op::Group, Complex(0.0), idx}; };
    auto bexp = [](Complex alpha, double beta = 0.0, double gamma = 0.0, int pade = 2) {
        return ModifiedExponentSpec{alpha, beta, gamma, pade};
    };

    {
        GeneralSplitting tj;
        tj.id = "triple_jump_44";
        const double a1 = (2.0 + std::pow(2.0, -1.0 / 3.0) + std::pow(2.0, 1.0 / 3.0)) / 6.0;
        const double b1 = 2.0 * a1;
        const double a2 = 0.5 - a1;
        const double b2 = 1.0 - 2.0 * b1;
        tj.bspecs = {bexp(b1, 0, 0, 4), bexp(b2, 0, 0, 4)};
        tj.stages = {dstage(a1), bstage(0), dstage(a2), bstage(1),
                     dstage(a2), bstage(0), dstage(a1)};
        tj.p1 = 4;
        tj.p2 = 4;
        tj.chain_product_count = 2;
        cat.splittings.push_back(std::move(tj));
    }
    {
        GeneralSplitting s6;
        s6.id = "S6_44";
        const double a1 = 0.19731107566242791631;
        const double a2 = 0.38252646594731312955;
        const double a3 = 0.5 - a1 - a2;
        const double b1 = 0.42519341909910345071;
        const double b2 = 1.0 - 4.0 * b1;
        s6.bspecs = {bexp(b1, 0, 0, 4), bexp(b2, 0, 0, 4)};
        s6.groups = {{bstage(0), dstage(a2), bstage(0)}};
        s6.stages = {dstage(a1), gstage(0), dstage(a3), bstage(1),
                     dstage(a3), gstage(0), dstage(a1)};
        s6.p1 = 4;
        s6.p2 = 4;
        s6.chain_product_count = 3;
        cat.splittings.push_back(std::move(s6));
    }
    {
        GeneralSplitting s7;
        s7.id = "S7_64";
        const double a1 = 0.35937529621978708941;
        const double a2 = -0.098379231055234835826;
        const double a3 = 1.0 - 2.0 * a1 - 4.0 * a2;
        const double b1 = 0.67702963544760500586;
        const double b2 = 0.5 - 2.0 * b1;
        s7.bspecs = {bexp(b1, 0, 0, 4), bexp(b2, 0, 0, 4)};
        s7.groups = {{bstage(0), dstage(a2), bstage(1), dstage(a2), bstage(0)}};
        s7.stages = {dstage(a1), gstage(0), dstage(a3), gstage(0), dstage(a1)};
        s7.p1 = 6;
        s7.p2 = 4;
        s7.chain_product_count = 3;
        cat.splittings.push_back(std::move(s7));
    }
    // Compensated four-stage compositions: the mapping of the printed
    // correction coefficients onto the modified exponents is a best guess,
    // so these ship disabled for automatic use.
    auto psi = [&](std::string id, int p1, double c1, double d1, double c2, double d2) {
        GeneralSplitting ps;
        ps.id = std::move(id);
        const double a2 = 0.50468619989723192191;
        const double a1 = 0.5 - a2;
        const double b2 = -0.58268652153120735848;
        const double b1 = (1.0 - b2) / 2.0;
        ps.bspecs = {bexp(b1, c1, d1, 2), bexp(b2, c2, d2, 2)};
        ps.stages = {dstage(a1), bstage(0), dstage(a2), bstage(1),
                     dstage(a2), bstage(0), dstage(a1)};
        ps.p1 = p1;
        ps.p2 = 4;
        ps.chain_product_count = 2;
        ps.experimental = true;
        ps.verified = false;
        return ps;
    };
    cat.splittings.push_back(psi("Psi4mod_104", 10, -0.0079989398412468330564,
                                 0.000039345117326816272608, -0.14389703981903926044,
                                 -0.0017987433839305087766));
    cat.splittings.push_back(psi("Psi4mod_84", 8, -0.061046475308497637733,
                                 0.0011653151315644152329, -0.03780196888453765108,
                                 0.009460956758445480826));

    {
        ProcessorSpec p;
        p.id = "proc_Yt0_64";
        p.kernel = squaring("proc_Yt0_64.kernel", 0, {0.5}, -1.0 / 24.0, 31.0 / 5760.0, 4, 6, 4,
                            true);
        p.x = -1.0 / 12.0;
        p.y = 1.0 / 120.0;
        p.p1 = 6;
        p.p2 = 4;
        cat.processed.push_back(std::move(p));
    }
    {
        ProcessorSpec p;
        p.id = "proc_Yt1_64";
        const double a2 = 0.2587977340833403434530275;
        p.kernel = squaring("proc_Yt1_64.kernel", 1, {1.0 - 2.0 * a2, a2},
                            -0.005227683364583625421653925, 0.00023712024828002505, 4, 6, 4, true);
        p.x = -0.02303276685416841919659022;
        p.y = 0.0007499977372301362425777840;
        p.p1 = 6;
        p.p2 = 4;
        cat.processed.push_back(std::move(p));
    }
    {
        ProcessorSpec p;
        p.id = "proc_Yt1_104";
        const double a2 = 0.250225501288894385213924;
        p.kernel = squaring("proc_Yt1_104.kernel", 1, {1.0 - 2.0 * a2, a2},
                            -0.0052083460460411565905784, -0.00006473666364394767, 4, 10, 4, true);
        p.x = -0.0208897086555569296368143;
        p.y = 0.0000573371861339342917744;
        p.p1 = 10;
        p.p2 = 4;
        cat.processed.push_back(std::move(p));
    }

    return cat;
}

}  // namespace

const Catalog& catalog() {
    static const Catalog cat = build_catalog();
    return cat;
}

bool consistency_check(const SquaringScheme& scheme) {
    if (static_cast<int>(scheme.a.size()) != scheme.s1 + 1) return false;
    Complex sum(0.0);
    for (int k = 0; k < scheme.s1; ++k) sum += std::pow(2.0, scheme.s1 - 1 - k) * scheme.a[k];
    sum += 2.0 * scheme.a[scheme.s1];
    const Complex alpha_expected(std::pow(0.5, scheme.s1));
    return std::abs(sum - 1.0) <= 1e-12 && std::abs(scheme.center.alpha - alpha_expected) <= 1e-12;
}

namespace {

void accumulate_stage_sums(const GeneralSplitting& g, const std::vector<SplitStage>& chain,
                           Complex& dsum, Complex& bsum) {
    for (const auto& st : chain) {
        switch (st.op) {
            case SplitStage::Op::D: dsum += st.coeff; break;
            case SplitStage::Op::B: bsum += g.bspecs[st.index].alpha; break;
            case SplitStage::Op::Group: accumulate_stage_sums(g, g.groups[st.index], dsum, bsum);
                break;
        }
    }
}

}  // namespace

bool consistency_check(const GeneralSplitting& scheme) {
    Complex dsum(0.0), bsum(0.0);
    accumulate_stage_sums(scheme, scheme.stages, dsum, bsum);
    return std::abs(dsum - 1.0) <= 1e-12 && std::abs(bsum - 1.0) <= 1e-12;
}

DenseMatrix build_center_exponent(const PerturbedMatrix& P, double h,
                                  const ModifiedExponentSpec& spec, CostTally& tally) {
    DenseMatrix M = spec.alpha * h * P.eps * P.B;
    if (spec.beta != 0.0)
        M += spec.beta * std::pow(h, 3) * P.eps * nested_commutator(P.D, P.B, 2, tally);
    if (spec.gamma != 0.0)
        M += spec.gamma * std::pow(h, 5) * P.eps * nested_commutator(P.D, P.B, 4, tally);
    return M;
}

namespace {

DenseMatrix inner_exponential(const DenseMatrix& M, int order, CostTally& tally) {
    return order == 4 ? pade_r4(M, tally) : pade_r2(M, tally);
}

int effective_order(int scheme_default, int override_order) {
    return override_order == 0 ? scheme_default : override_order;
}

DenseMatrix right_inverse_multiply(const DenseMatrix& Y, const DenseMatrix& X, CostTally& tally) {
    return inverse_multiply(X.transpose(), Y.transpose(), tally).transpose();
}

}  // namespace

DenseMatrix run_modified_squaring(const PerturbedMatrix& P, const SquaringScheme& scheme, double h,
                                  int s2, CostTally& tally, int inner_order) {
    const DenseMatrix M = build_center_exponent(P, h, scheme.center, tally);
    DenseMatrix X =
        inner_exponential(M, effective_order(scheme.center.pade_order, inner_order), tally);
    for (int k = 0; k < scheme.s1; ++k) {
        const StructuredOperator E = exp_structured(P.D, scheme.a[k] * h, &tally);
        X = matmul(X, struct_multiply(E, X, Side::Left, tally), tally);
    }
    const StructuredOperator Eo = exp_structured(P.D, scheme.a[scheme.s1] * h, &tally);
    DenseMatrix Y = struct_multiply(Eo, struct_multiply(Eo, X, Side::Left, tally), Side::Right,
                                    tally);
    for (int i = 0; i < s2; ++i) Y = matmul(Y, Y, tally);
    return Y;
}

namespace {

struct ChainEvaluator {
    const PerturbedMatrix& P;
    const GeneralSplitting& g;
    double h;
    int inner_order;
    CostTally& tally;
    std::map<int, DenseMatrix> bexp_cache;
    std::map<int, DenseMatrix> group_cache;

    const DenseMatrix& b_exponential(int idx) {
        auto it = bexp_cache.find(idx);
        if (it != bexp_cache.end()) return it->second;
        const ModifiedExponentSpec& spec = g.bspecs[idx];
        const DenseMatrix M = build_center_exponent(P, h, spec, tally);
        DenseMatrix E = inner_exponential(M, effective_order(spec.pade_order, inner_order), tally);
        return bexp_cache.emplace(idx, std::move(E)).first->second;
    }

    DenseMatrix eval(const std::vector<SplitStage>& chain) {
        std::optional<DenseMatrix> Y;
        std::optional<StructuredOperator> pending;  // structured factor awaiting a dense partner
        auto absorb = [&](const DenseMatrix& dense) {
            DenseMatrix piece =
                pending ? struct_multiply(*pending, dense, Side::Left, tally) : dense;
            pending.reset();
            Y = Y ? matmul(*Y, piece, tally) : std::move(piece);
        };
        for (const auto& st : chain) {
            switch (st.op) {
                case SplitStage::Op::D: {
                    const StructuredOperator E = exp_structured(P.D, st.coeff * h, &tally);
                    if (Y && !pending)
                        Y = struct_multiply(E, *Y, Side::Right, tally);
                    else if (pending)
                        throw UnsupportedStructure(
                            "general splitting: consecutive structured stages");
                    else
                        pending = E;
                    break;
                }
                case SplitStage::Op::B: absorb(b_exponential(st.index)); break;
                case SplitStage::Op::Group: {
                    auto it = group_cache.find(st.index);
                    if (it == group_cache.end())
                        it = group_cache.emplace(st.index, eval(g.groups[st.index])).first;
                    absorb(it->second);
                    break;
                }
            }
        }
        if (!Y) throw InvalidConfig("general splitting: chain has no dense stage");
        if (pending) Y = struct_multiply(*pending, *Y, Side::Right, tally);
        return *Y;
    }
};

}  // namespace

DenseMatrix run_general_splitting(const PerturbedMatrix& P, const GeneralSplitting& scheme,
                                  double h, int s2, CostTally& tally, int inner_order) {
    ChainEvaluator ev{P, scheme, h, inner_order, tally, {}, {}};
    DenseMatrix Y = ev.eval(scheme.stages);
    for (int i = 0; i < s2; ++i) Y = matmul(Y, Y, tally);
    return Y;
}

DenseMatrix run_processed(const PerturbedMatrix& P, const ProcessorSpec& proc, double h, int s2,
                          CostTally& tally, int inner_order) {
    DenseMatrix Pexp = proc.x * h * h * P.eps * nested_commutator(P.D, P.B, 1, tally);
    if (proc.y != 0.0)
        Pexp += proc.y * std::pow(h, 4) * P.eps * nested_commutator(P.D, P.B, 3, tally);
    const DenseMatrix K = run_modified_squaring(P, proc.kernel, h, s2, tally, inner_order);
    const DenseMatrix F = pade_r2(Pexp, tally);
    return right_inverse_multiply(matmul(F, K, tally), F, tally);
}

}  // namespace expsplit
