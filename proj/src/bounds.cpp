#include "znec/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace znec {

void NetworkParams::validate() const {
    if (n < 1 || m < 1) throw std::invalid_argument("need at least one link each way");
    if (z < 1) throw std::invalid_argument("adversary must own at least one link");
    if (n < z || m < z) throw std::invalid_argument("adversary cannot exceed either link bundle");
    if (c < 1 || b < 1) throw std::invalid_argument("capacities must be positive");
    if (a <= c) throw std::invalid_argument("upstream links must outcarry downstream links");
    if (a <= b) throw std::invalid_argument("feedback must be smaller than an upstream link");
    if (!is_prime(q)) throw std::invalid_argument("field order must be prime");
}

int upper_bound(const NetworkParams& p) {
    p.validate();
    return (p.n - p.z) * p.a + (p.m - p.z) * p.c + p.b;
}

int classify(const NetworkParams& p) {
    p.validate();
    bool wide_up = p.n >= 2 * (p.z - 1);
    bool wide_down = p.m >= 2 * p.z;
    if (wide_up && wide_down) return 1;
    if (!wide_up && wide_down) return 2;
    if (wide_up && !wide_down) return 3;
    return 4;
}

std::map<std::string, int> singleton_bounds(const NetworkParams& p) {
    int cat = classify(p);
    std::map<std::string, int> sb;
    switch (cat) {
        case 1:
            sb["SB1"] = p.n * p.a + (p.m - 2 * p.z) * p.c;
            sb["SB2"] = (p.n - 2 * (p.z - 1)) * p.a + p.m * p.c;
            break;
        case 2:
            sb["SB1"] = p.n * p.a + (p.m - 2 * p.z) * p.c;
            sb["SB2"] = (p.n + p.m - 2 * p.z + 2) * p.c;
            break;
        case 3:
            sb["SB1"] = (p.n - (2 * p.z - p.m)) * p.a;
            sb["SB2"] = (p.n - 2 * (p.z - 1)) * p.a + p.m * p.c;
            break;
        default:
            sb["SB1"] = (p.n - (2 * p.z - p.m)) * p.a;
            sb["SB2"] = (p.n + p.m - 2 * p.z + 2) * p.c;
            break;
    }
    sb["SB3"] = (p.n - p.z + 1) * p.a + (p.m - p.z) * p.c;
    sb["SB4"] = upper_bound(p);
    return sb;
}

bool tight_condition(const NetworkParams& p) {
    int cat = classify(p);
    int up = p.z * (p.a - p.c);              // margin against SB1 in regimes 1, 2
    int down = p.z * p.c - (p.z - 2) * p.a;  // margin against SB2 in regimes 1, 3
    int narrow_up = (p.n - p.z + 2) * p.c - (p.n - p.z) * p.a;
    int narrow_down = (p.m - p.z) * (p.a - p.c);
    int lim = 0;
    switch (cat) {
        case 1: lim = std::min(up, down); break;
        case 2: lim = std::min(up, narrow_up); break;
        case 3: lim = std::min(down, narrow_down); break;
        default: lim = std::min(narrow_up, narrow_down); break;
    }
    return p.b < lim;
}

int identified_margin(const NetworkParams& p, int x) {
    int cat = classify(p);
    if (x < 0 || x > p.n) throw std::invalid_argument("discounted link count out of range");
    if (cat == 1 || cat == 3 || x > 2 * p.z - p.n)
        return p.a * x - p.z * (p.a - p.c) - p.b;
    return x * p.c - (p.n - p.z) * (p.a - p.c) - p.b;
}

BoundReport bound_report(const NetworkParams& p) {
    BoundReport r;
    r.ub = upper_bound(p);
    r.sb = singleton_bounds(p);
    r.category = classify(p);
    r.tight = tight_condition(p);
    r.margin_at_2 = identified_margin(p, 2);
    return r;
}

namespace {

std::set<int> pinned_feedback(const CutSpec& cut, const std::set<int>& source_side,
                              const std::set<int>& target_side) {
    // feedback links that hear some source-side link and feed some target-side link
    std::set<int> out;
    for (const auto& fb : cut.feedback) {
        bool hears = false;
        for (const auto& [fwd, f] : cut.downstream_of)
            if (f == fb.id && source_side.count(fwd)) hears = true;
        bool feeds = false;
        for (const auto& [f, fwd] : cut.upstream_of)
            if (f == fb.id && target_side.count(fwd)) feeds = true;
        if (hears && feeds) out.insert(fb.id);
    }
    return out;
}

}  // namespace

int confusion_bound(const CutSpec& cut, const std::vector<int>& z1, const std::vector<int>& z2,
                    int z) {
    std::set<int> forward_ids;
    std::map<int, int> caps;
    for (const auto& l : cut.forward) {
        forward_ids.insert(l.id);
        caps[l.id] = l.capacity;
    }
    std::map<int, int> fb_caps;
    for (const auto& l : cut.feedback) fb_caps[l.id] = l.capacity;

    std::set<int> s1(z1.begin(), z1.end()), s2(z2.begin(), z2.end());
    if (static_cast<int>(s1.size()) > z || static_cast<int>(s2.size()) > z)
        throw std::invalid_argument("adversarial set exceeds budget");
    for (int id : s1)
        if (!forward_ids.count(id)) throw std::invalid_argument("unknown forward link in Z1");
    for (int id : s2)
        if (!forward_ids.count(id)) throw std::invalid_argument("unknown forward link in Z2");
    for (int id : s1)
        if (s2.count(id)) throw std::invalid_argument("adversarial sets must be disjoint");

    std::set<int> rest;  // forward links outside both sets
    for (int id : forward_ids)
        if (!s1.count(id) && !s2.count(id)) rest.insert(id);

    std::set<int> not_z1;
    for (int id : forward_ids)
        if (!s1.count(id)) not_z1.insert(id);
    std::set<int> not_z2;
    for (int id : forward_ids)
        if (!s2.count(id)) not_z2.insert(id);

    std::set<int> w1 = pinned_feedback(cut, s1, not_z1);
    std::set<int> w2 = pinned_feedback(cut, s2, not_z2);
    if (w2.empty()) w1 = pinned_feedback(cut, s1, rest);

    // The pinning argument fails if the other adversarial set can still
    // influence a pinned feedback value.
    for (int f : w1)
        for (const auto& [fwd, fid] : cut.downstream_of)
            if (fid == f && s2.count(fwd))
                throw std::invalid_argument("Z2 feeds a feedback link pinned by Z1");
    for (int f : w2)
        for (const auto& [fwd, fid] : cut.downstream_of)
            if (fid == f && s1.count(fwd))
                throw std::invalid_argument("Z1 feeds a feedback link pinned by Z2");

    int total = 0;
    for (int id : rest) total += caps[id];
    for (int id : w1) total += fb_caps[id];
    for (int id : w2)
        if (!w1.count(id)) total += fb_caps[id];
    return total;
}

int min_confusion_bound(const CutSpec& cut, int z) {
    if (cut.forward.size() > 16) throw std::invalid_argument("cut too large for enumeration");
    std::vector<int> ids;
    for (const auto& l : cut.forward) ids.push_back(l.id);
    const std::size_t nf = ids.size();

    int best = -1;
    // enumerate subsets by bitmask; skip oversized ones
    for (std::uint32_t m1 = 0; m1 < (1u << nf); ++m1) {
        if (__builtin_popcount(m1) > z) continue;
        for (std::uint32_t m2 = 0; m2 < (1u << nf); ++m2) {
            if (__builtin_popcount(m2) > z || (m1 & m2)) continue;
            std::vector<int> z1, z2;
            for (std::size_t i = 0; i < nf; ++i) {
                if (m1 & (1u << i)) z1.push_back(ids[i]);
                if (m2 & (1u << i)) z2.push_back(ids[i]);
            }
            int v;
            try {
                v = confusion_bound(cut, z1, z2, z);
            } catch (const std::invalid_argument&) {
                continue;
            }
            if (best < 0 || v < best) best = v;
        }
    }
    return best;
}

CutSpec four_node_cut(const NetworkParams& p) {
    p.validate();
    CutSpec cut;
    for (int j = 0; j < p.n; ++j) cut.forward.push_back({j, p.a});
    for (int j = 0; j < p.m; ++j) cut.forward.push_back({p.n + j, p.c});
    int fb = p.n + p.m;
    cut.feedback.push_back({fb, p.b});
    for (int j = 0; j < p.n; ++j) cut.downstream_of.push_back({j, fb});
    for (int j = 0; j < p.m; ++j) cut.upstream_of.push_back({fb, p.n + j});
    return cut;
}

TinyNetwork make_tiny_network(const NetworkParams& p, std::uint64_t seed) {
    p.validate();
    TinyNetwork net;
    net.p = p;
    Field f(p.q);
    Rng rng(seed);
    net.feedback_map = SymbolMatrix(p.b, std::size_t(p.n) * p.a, f);
    for (auto& v : net.feedback_map.data()) v = rng.symbol(f);
    return net;
}

std::vector<TinyCodeword> tiny_codebook(const TinyNetwork& net, std::size_t size) {
    const NetworkParams& p = net.p;
    Field f(p.q);
    std::vector<TinyCodeword> book;
    book.reserve(size);
    // count in base q across all wire symbols: deterministic and collision-free
    std::size_t cells = std::size_t(p.n) * p.a + std::size_t(p.m) * p.c;
    std::vector<Symbol> digits(cells, 0);
    for (std::size_t idx = 0; idx < size; ++idx) {
        TinyCodeword cw;
        cw.upstream = SymbolMatrix(p.a, p.n, f);
        cw.downstream = SymbolMatrix(p.c, p.m, f);
        std::size_t d = 0;
        for (auto& v : cw.upstream.data()) v = digits[d++];
        for (auto& v : cw.downstream.data()) v = digits[d++];
        book.push_back(std::move(cw));
        for (std::size_t i = 0; i < cells; ++i) {
            digits[i] = (digits[i] + 1) % p.q;
            if (digits[i] != 0) break;
        }
    }
    return book;
}

namespace {

std::vector<Symbol> tiny_feedback(const TinyNetwork& net, const SymbolMatrix& upstream) {
    std::vector<Symbol> flat(upstream.data().begin(), upstream.data().end());
    return mat_vec(net.feedback_map, flat);
}

std::vector<Symbol> tiny_signature(const TinyNetwork& net, const TinyCodeword& cw,
                                   const std::set<int>& s1, const std::set<int>& s2) {
    const NetworkParams& p = net.p;
    std::vector<Symbol> sig;
    for (int j = 0; j < p.n; ++j) {
        if (s1.count(j)) continue;
        for (int r = 0; r < p.a; ++r) sig.push_back(cw.upstream.at(r, j));
    }
    for (int j = 0; j < p.m; ++j) {
        if (s2.count(p.n + j)) continue;
        for (int r = 0; r < p.c; ++r) sig.push_back(cw.downstream.at(r, j));
    }
    // feedback is a function of the upstream block, which the surviving
    // signature must pin down in both worlds
    std::vector<Symbol> fb = tiny_feedback(net, cw.upstream);
    sig.insert(sig.end(), fb.begin(), fb.end());
    return sig;
}

}  // namespace

std::optional<ConfusionPair> confusion_attack(const TinyNetwork& net,
                                              const std::vector<TinyCodeword>& codebook,
                                              const std::vector<int>& z1,
                                              const std::vector<int>& z2) {
    const NetworkParams& p = net.p;
    std::set<int> s1(z1.begin(), z1.end()), s2(z2.begin(), z2.end());
    for (int id : s1)
        if (id < 0 || id >= p.n) throw std::invalid_argument("Z1 must name upstream links");
    for (int id : s2)
        if (id < p.n || id >= p.n + p.m) throw std::invalid_argument("Z2 must name downstream links");
    if (static_cast<int>(s1.size()) > p.z || static_cast<int>(s2.size()) > p.z)
        throw std::invalid_argument("adversarial set exceeds budget");

    CutSpec cut = four_node_cut(p);
    int mexp = confusion_bound(cut, z1, z2, p.z);
    double space = std::pow(double(p.q), double(mexp));
    if (double(codebook.size()) <= space)
        throw std::invalid_argument("codebook too small for a guaranteed collision");

    std::map<std::vector<Symbol>, std::size_t> seen;
    for (std::size_t i = 0; i < codebook.size(); ++i) {
        std::vector<Symbol> sig = tiny_signature(net, codebook[i], s1, s2);
        auto it = seen.find(sig);
        if (it == seen.end()) {
            seen.emplace(std::move(sig), i);
            continue;
        }
        ConfusionPair pair;
        pair.first = it->second;
        pair.second = i;
        const TinyCodeword& x = codebook[pair.first];
        const TinyCodeword& y = codebook[pair.second];
        Field f(p.q);
        for (int j : s1) {
            std::vector<Symbol> err(p.a);
            for (int r = 0; r < p.a; ++r) err[r] = f.sub(y.upstream.at(r, j), x.upstream.at(r, j));
            pair.errors_z1[j] = std::move(err);
        }
        for (int id : s2) {
            int j = id - p.n;
            std::vector<Symbol> err(p.c);
            for (int r = 0; r < p.c; ++r) err[r] = f.sub(x.downstream.at(r, j), y.downstream.at(r, j));
            pair.errors_z2[id] = std::move(err);
        }
        return pair;
    }
    return std::nullopt;
}

}  // namespace znec
