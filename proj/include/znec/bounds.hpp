#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "znec/galois.hpp"

namespace znec {

// Network shape: n parallel upstream links of capacity a from the source to
// relay A, m downstream links of capacity c from relay B to the sink, one
// feedback link A -> B of capacity b, plus unbounded reliable side channels
// s -> B and A -> sink. An adversary controls at most z links. Requires
// a > c and a > b.
struct NetworkParams {
    int n = 0;
    int m = 0;
    int a = 0;
    int b = 0;
    int c = 0;
    int z = 0;
    std::uint32_t q = 257;

    void validate() const;
};

// Largest message count (in field symbols per round) the scheme targets.
int upper_bound(const NetworkParams& p);

// Parameter regimes 1..4, split on n vs 2(z-1) and m vs 2z.
int classify(const NetworkParams& p);

// Cut-set style bounds SB1..SB4 for the current regime (SB4 is the rate above).
std::map<std::string, int> singleton_bounds(const NetworkParams& p);

// True when the feedback link is small enough that the rate above beats
// every cut-set bound strictly.
bool tight_condition(const NetworkParams& p);

// Strict surplus of the x-message count over what an adversary-aligned cut
// leaves, once x upstream links are discounted. Positive at x = 2 whenever
// the tight condition holds; nondecreasing in x.
int identified_margin(const NetworkParams& p, int x);

struct BoundReport {
    int ub = 0;
    std::map<std::string, int> sb;
    int category = 0;
    bool tight = false;
    int margin_at_2 = 0;
};

BoundReport bound_report(const NetworkParams& p);

// ---- generic cut description for the confusion bound ----

struct CutSpec {
    struct Link {
        int id = 0;
        int capacity = 0;
    };
    std::vector<Link> forward;
    std::vector<Link> feedback;
    // (forward id, feedback id): the feedback link hears the forward link
    std::vector<std::pair<int, int>> downstream_of;
    // (feedback id, forward id): the feedback link feeds the forward link
    std::vector<std::pair<int, int>> upstream_of;
};

// Max distinguishable-message exponent for one adversarial pair (Z1, Z2):
// capacities of surviving forward links plus the feedback links whose values
// become pinned. Throws std::invalid_argument on malformed pairs.
int confusion_bound(const CutSpec& cut, const std::vector<int>& z1, const std::vector<int>& z2,
                    int z);

// Minimum of the bound over every admissible (Z1, Z2) pair; forward link
// count must stay small (exhaustive enumeration).
int min_confusion_bound(const CutSpec& cut, int z);

// The cut through all 2n + m + 1 finite-capacity links of the network.
CutSpec four_node_cut(const NetworkParams& p);

// ---- tiny deterministic network for building a confusable pair ----

struct TinyNetwork {
    NetworkParams p;
    // feedback payload as a linear map of the flattened upstream block
    SymbolMatrix feedback_map;  // b x (n*a)
};

struct TinyCodeword {
    SymbolMatrix upstream;    // a x n
    SymbolMatrix downstream;  // c x m
};

struct TinyObservation {
    SymbolMatrix upstream;    // what the sink hears via the relay
    SymbolMatrix downstream;  // what the sink receives directly
    std::vector<Symbol> feedback;
};

struct ConfusionPair {
    std::size_t first = 0;
    std::size_t second = 0;
    std::map<int, std::vector<Symbol>> errors_z1;  // applied while `first` is sent
    std::map<int, std::vector<Symbol>> errors_z2;  // applied while `second` is sent
};

TinyNetwork make_tiny_network(const NetworkParams& p, std::uint64_t seed);

// Deterministic enumeration codebook of the requested size.
std::vector<TinyCodeword> tiny_codebook(const TinyNetwork& net, std::size_t size);

// Pigeonhole search for two codewords the sink cannot tell apart when the
// adversary owns Z1 (upstream ids) in one world and Z2 (downstream ids) in
// the other. Requires |codebook| > q^M for the pair's confusion bound M.
std::optional<ConfusionPair> confusion_attack(const TinyNetwork& net,
                                              const std::vector<TinyCodeword>& codebook,
                                              const std::vector<int>& z1,
                                              const std::vector<int>& z2);

}  // namespace znec
