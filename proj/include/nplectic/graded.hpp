#pragma once

//
// Graded-sign bookkeeping: permutations in one-line image notation,
// block shuffles, and Koszul signs.
//
// Degrees are caller-supplied integers.  The calculus layer passes tensor
// degrees (or shifted tensor degrees for bracket identities); the bracket
// tower passes symmetric degrees.  An element without a homogeneous degree
// cannot be expressed here: callers split such inputs first.
//

#include "errors.hpp"

#include <cstdint>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

namespace nplectic {

/// A permutation of {1..k} in one-line notation: images[i] is the image of
/// position i+1.  For a permuted tuple (v_{s_1}, ..., v_{s_k}) the entry at
/// position i is the original element with index images[i].
struct Permutation {
    std::vector<int> images;

    Permutation() = default;
    explicit Permutation(std::vector<int> imgs) : images(std::move(imgs)) {}

    static Permutation identity(int k) {
        std::vector<int> v(static_cast<std::size_t>(k));
        std::iota(v.begin(), v.end(), 1);
        return Permutation(std::move(v));
    }

    [[nodiscard]] int size() const { return static_cast<int>(images.size()); }
    int operator[](int pos) const { return images.at(static_cast<std::size_t>(pos - 1)); }

    bool operator==(const Permutation& o) const { return images == o.images; }
    bool operator<(const Permutation& o) const { return images < o.images; }

    [[nodiscard]] std::string render() const {
        std::ostringstream os;
        os << "(";
        for (std::size_t i = 0; i < images.size(); ++i)
            os << (i ? "," : "") << images[i];
        os << ")";
        return os.str();
    }
};

/// compose(t, s): first apply s, then t; images obey compose(t,s)_i = s_{t_i}.
inline Permutation compose(const Permutation& t, const Permutation& s) {
    if (t.size() != s.size())
        throw ArityError("compose: permutations of different size");
    std::vector<int> u(static_cast<std::size_t>(t.size()));
    for (int i = 1; i <= t.size(); ++i)
        u[static_cast<std::size_t>(i - 1)] = s[t[i]];
    return Permutation(std::move(u));
}

/// Per-element degrees of a graded tuple, in original (unpermuted) order.
struct GradedSignature {
    std::vector<long long> degrees;

    GradedSignature() = default;
    explicit GradedSignature(std::vector<long long> deg) : degrees(std::move(deg)) {}

    [[nodiscard]] int size() const { return static_cast<int>(degrees.size()); }
};

inline int sign_e(long long degree) { return (degree % 2 == 0) ? 1 : -1; }

inline int sign_e2(long long d1, long long d2) {
    return ((d1 % 2 != 0) && (d2 % 2 != 0)) ? -1 : 1;
}

/// Koszul sign e(s; v_1..v_k): the sign produced by permuting homogeneous
/// graded elements v_i into the order (v_{s_1}, ..., v_{s_k}).  An adjacent
/// transposition of elements with degrees a, b contributes (-1)^{a b};
/// in closed form the sign is the product of (-1)^{deg(v_{s_i}) deg(v_{s_j})}
/// over all inversions i < j with s_i > s_j.
inline int koszul_sign(const Permutation& s, const GradedSignature& sig) {
    if (s.size() != sig.size())
        throw ArityError("koszul_sign: permutation size " + std::to_string(s.size()) +
                         " does not match signature size " + std::to_string(sig.size()));
    int sign = 1;
    for (int i = 1; i <= s.size(); ++i)
        for (int j = i + 1; j <= s.size(); ++j)
            if (s[i] > s[j])
                sign *= sign_e2(sig.degrees[static_cast<std::size_t>(s[i] - 1)],
                                sig.degrees[static_cast<std::size_t>(s[j] - 1)]);
    return sign;
}

/// A (p, q, ...)-shuffle: a permutation of {1..p+q+...} that is strictly
/// increasing inside each designated block.
struct BlockShuffle {
    std::vector<int> blocks;  ///< block sizes, in order (entries may be 0)
    Permutation perm;         ///< one-line images, blocks concatenated
};

namespace detail {

inline void enumerate_shuffles_rec(const std::vector<int>& blocks, std::size_t block_index,
                                   std::vector<int>& remaining, std::vector<int>& prefix,
                                   std::vector<BlockShuffle>& out) {
    if (block_index == blocks.size()) {
        out.push_back(BlockShuffle{blocks, Permutation(prefix)});
        return;
    }
    const int take = blocks[block_index];
    const int avail = static_cast<int>(remaining.size());
    // choose an increasing `take`-tuple out of `remaining` (which is sorted),
    // in lexicographic order of the chosen values
    std::vector<int> idx(static_cast<std::size_t>(take));
    if (take > avail) return;  // no shuffle possible
    for (int i = 0; i < take; ++i) idx[static_cast<std::size_t>(i)] = i;
    while (true) {
        std::vector<int> next_remaining;
        next_remaining.reserve(remaining.size() - static_cast<std::size_t>(take));
        {
            std::size_t c = 0;
            for (std::size_t p = 0; p < remaining.size(); ++p) {
                if (c < idx.size() && static_cast<int>(p) == idx[c]) {
                    prefix.push_back(remaining[p]);
                    ++c;
                } else {
                    next_remaining.push_back(remaining[p]);
                }
            }
        }
        enumerate_shuffles_rec(blocks, block_index + 1, next_remaining, prefix, out);
        prefix.resize(prefix.size() - static_cast<std::size_t>(take));

        // advance the combination (lex order)
        int i = take - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == avail - take + i) --i;
        if (i < 0) break;
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < take; ++j)
            idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
}

}  // namespace detail

/// All (b_1, ..., b_m)-shuffles, in lexicographic order of the image tuple.
/// Blocks of size zero are allowed and contribute nothing.
inline std::vector<BlockShuffle> enumerate_shuffles(const std::vector<int>& blocks) {
    long long total = 0;
    for (int b : blocks) {
        if (b < 0) throw InvalidArgument("enumerate_shuffles: negative block size");
        total += b;
    }
    std::vector<int> remaining(static_cast<std::size_t>(total));
    std::iota(remaining.begin(), remaining.end(), 1);
    std::vector<int> prefix;
    prefix.reserve(remaining.size());
    std::vector<BlockShuffle> out;
    detail::enumerate_shuffles_rec(blocks, 0, remaining, prefix, out);
    return out;
}

}  // namespace nplectic
