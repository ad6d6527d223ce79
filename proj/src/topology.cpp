#include "cminlab/topology.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace cminlab {

const char* to_string(LcVerdict v) {
    switch (v) {
    case LcVerdict::LcAtAllScales: return "lc-at-all-scales";
    case LcVerdict::NotLc: return "not-lc";
    case LcVerdict::Undetermined: return "undetermined";
    }
    return "undetermined";
}

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

// Chain components over an id subset; labels are the lowest member id of each
// class, which makes the decomposition independent of union order.
ComponentDecomposition components_over(const CMinSpace& space, double eps,
                                       const std::vector<int>& ids) {
    ComponentDecomposition dec;
    dec.eps = eps;
    dec.label.assign(space.records.size(), -1);

    std::vector<int> pos(space.records.size(), -1);
    for (std::size_t k = 0; k < ids.size(); ++k) pos[ids[k]] = (int)k;

    UnionFind uf((int)ids.size());
    for (std::size_t a = 0; a < ids.size(); ++a)
        for (std::size_t b = a + 1; b < ids.size(); ++b)
            if (space.dmatrix[ids[a]][ids[b]] <= eps) uf.unite((int)a, (int)b);

    std::vector<int> root_label((int)ids.size(), -1);
    for (std::size_t k = 0; k < ids.size(); ++k) {
        int r = uf.find((int)k);
        if (root_label[r] < 0 || ids[k] < root_label[r]) root_label[r] = ids[k];
    }
    for (std::size_t k = 0; k < ids.size(); ++k) dec.label[ids[k]] = root_label[uf.find((int)k)];

    std::vector<int> distinct;
    for (int l : dec.label)
        if (l >= 0) distinct.push_back(l);
    std::sort(distinct.begin(), distinct.end());
    dec.count = (int)(std::unique(distinct.begin(), distinct.end()) - distinct.begin());
    return dec;
}

void check_space(const CMinSpace& space) {
    if (space.records.empty()) throw std::invalid_argument("topology: empty space");
    if (space.dmatrix.size() != space.records.size())
        throw std::invalid_argument("topology: distance matrix does not match records");
}

}  // namespace

ComponentDecomposition epsilon_components(const CMinSpace& space, double eps) {
    check_space(space);
    if (eps <= 0) throw std::invalid_argument("epsilon_components: eps must be positive");
    std::vector<int> all(space.records.size());
    std::iota(all.begin(), all.end(), 0);
    return components_over(space, eps, all);
}

ComponentDecomposition epsilon_components(const CMinSpace& space, double eps,
                                          const std::vector<int>& subset) {
    check_space(space);
    if (eps <= 0) throw std::invalid_argument("epsilon_components: eps must be positive");
    for (int i : subset)
        if (i < 0 || i >= (int)space.records.size())
            throw std::invalid_argument("epsilon_components: subset id out of range");
    return components_over(space, eps, subset);
}

TopologyDiagnostic local_connectedness_scan(const CMinSpace& space, int record_id,
                                            const std::vector<ScalePair>& scales) {
    check_space(space);
    if (record_id < 0 || record_id >= (int)space.records.size())
        throw std::invalid_argument("local_connectedness_scan: record id out of range");
    if (scales.empty()) throw std::invalid_argument("local_connectedness_scan: no scales");
    for (const auto& s : scales) {
        if (s.eps < 4.0 * space.dedup_eps)
            throw std::invalid_argument(
                "local_connectedness_scan: eps below 4x dedup_eps is inside merge noise");
        if (s.deltas.empty())
            throw std::invalid_argument("local_connectedness_scan: scale without deltas");
        for (std::size_t k = 0; k < s.deltas.size(); ++k) {
            if (s.deltas[k] >= s.eps)
                throw std::invalid_argument("local_connectedness_scan: delta must be below eps");
            if (k && s.deltas[k] >= s.deltas[k - 1])
                throw std::invalid_argument("local_connectedness_scan: deltas must decrease");
        }
    }

    TopologyDiagnostic diag;
    diag.record_id = record_id;
    const auto& drow = space.dmatrix[record_id];

    bool any_not_lc = false, any_soft_failure = false, any_degenerate = false;
    for (const auto& s : scales) {
        std::vector<int> ball;
        for (std::size_t j = 0; j < space.records.size(); ++j)
            if (drow[j] <= s.eps) ball.push_back((int)j);

        if ((int)ball.size() < 3) {
            any_degenerate = true;
            for (double d : s.deltas)
                diag.scales.push_back({s.eps, d, true, false, (int)ball.size(), (int)ball.size()});
            continue;
        }

        int run = 0;  // consecutive finer deltas that kept failing
        for (double d : s.deltas) {
            ComponentDecomposition dec = components_over(space, d, ball);
            bool ok = true;
            for (int j : ball)
                if (drow[j] <= s.eps / 2 && dec.label[j] != dec.label[record_id]) {
                    ok = false;
                    break;
                }
            diag.scales.push_back({s.eps, d, false, ok, dec.count, (int)ball.size()});
            if (ok) {
                run = 0;
            } else {
                any_soft_failure = true;
                if (++run >= 2) any_not_lc = true;
            }
        }
    }

    if (any_not_lc)
        diag.verdict = LcVerdict::NotLc;
    else if (!any_soft_failure && !any_degenerate)
        diag.verdict = LcVerdict::LcAtAllScales;
    else
        diag.verdict = LcVerdict::Undetermined;
    return diag;
}

Prediction predict_instability(const TopologyDiagnostic& diag) {
    Prediction p;
    p.record_id = diag.record_id;
    if (diag.verdict == LcVerdict::NotLc) {
        p.fires = true;
        p.note = "not locally connected: unstable minimal sets predicted in every neighbourhood";
    }
    return p;
}

DenseScanReport criterion_dense_scan(const CMinSpace& space,
                                     const std::vector<ScalePair>& scales) {
    check_space(space);
    if (space.records.size() < 10)
        throw std::invalid_argument("criterion_dense_scan: needs at least 10 records");
    if (scales.empty()) throw std::invalid_argument("criterion_dense_scan: no scales");

    DenseScanReport rep;
    rep.dense_eps = scales.front().eps;
    for (const auto& s : scales) rep.dense_eps = std::min(rep.dense_eps, s.eps);

    for (std::size_t i = 0; i < space.records.size(); ++i) {
        rep.diagnostics.push_back(local_connectedness_scan(space, (int)i, scales));
        if (rep.diagnostics.back().verdict == LcVerdict::NotLc)
            rep.not_lc_records.push_back((int)i);
    }
    if (rep.not_lc_records.empty()) return rep;

    bool dense = true;
    for (std::size_t i = 0; i < space.records.size() && dense; ++i) {
        bool near = false;
        for (int j : rep.not_lc_records)
            if (space.dmatrix[i][j] <= rep.dense_eps) {
                near = true;
                break;
            }
        dense = near;
    }
    rep.fires = dense;
    return rep;
}

ConfusionReport crossvalidate(const CMinSpace& space,
                              const std::vector<StabilityVerdict>& verdicts,
                              const std::vector<TopologyDiagnostic>& diags,
                              double hyper_radius) {
    check_space(space);
    if (verdicts.size() != space.records.size() || diags.size() != space.records.size())
        throw std::invalid_argument("crossvalidate: verdicts and diagnostics must cover every record");

    ConfusionReport rep;
    rep.hyper_radius = hyper_radius;
    for (std::size_t i = 0; i < space.records.size(); ++i) {
        bool pred = diags[i].verdict == LcVerdict::NotLc;
        HyperVerdict h = classify_hyper_stability(space, verdicts, (int)i, hyper_radius);
        rep.predicted.push_back(pred);
        rep.hyper.push_back(h);
        if (pred) {
            switch (h.kind) {
            case HyperKind::ClHUMember:
                // A prediction at a record that is itself unstable confirms
                // trivially (the record is its own offender); only count a
                // true positive when the topology revealed something the
                // record's own verdict did not.
                if (verdicts[i].kind == StabilityKind::UnstableWitnessed)
                    ++rep.predicted_self_evident;
                else
                    ++rep.true_positives;
                break;
            case HyperKind::HyperStableAtScale: {
                ++rep.false_positives;
                std::string note = "record " + std::to_string(i) +
                                   ": not-lc at scales (eps,delta):";
                for (const auto& sc : diags[i].scales)
                    if (!sc.degenerate && !sc.locally_connected)
                        note += " (" + std::to_string(sc.eps) + "," + std::to_string(sc.delta) + ")";
                note += " but no unstable record within set-distance " +
                        std::to_string(hyper_radius) + "; resolution artifact";
                rep.artifact_notes.push_back(note);
                break;
            }
            case HyperKind::Undetermined: ++rep.predicted_undetermined; break;
            }
        } else {
            switch (h.kind) {
            case HyperKind::ClHUMember: ++rep.silent_members; break;
            case HyperKind::HyperStableAtScale: ++rep.silent_hyper_stable; break;
            case HyperKind::Undetermined: ++rep.silent_undetermined; break;
            }
        }
    }
    return rep;
}

}  // namespace cminlab
