#ifndef SCV_TREE_EDIT_HPP
#define SCV_TREE_EDIT_HPP

#include <algorithm>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "scv/expr.hpp"

namespace scv {

struct LabelTree {
    std::string label;
    std::vector<LabelTree> children;
};

inline LabelTree to_label_tree(const ExprAst& t) {
    LabelTree out;
    out.label = expr_label(t);
    for (const auto& c : t.children) out.children.push_back(to_label_tree(c));
    return out;
}

inline std::size_t label_tree_size(const LabelTree& t) {
    std::size_t n = 1;
    for (const auto& c : t.children) n += label_tree_size(c);
    return n;
}

namespace detail {

struct TedNodes {
    std::vector<std::string> labels;  // postorder
    std::vector<int> lml;             // leftmost leaf descendant, postorder index
};

inline int ted_flatten(const LabelTree& t, TedNodes& out) {
    int first_leaf = -1;
    for (const auto& c : t.children) {
        int l = ted_flatten(c, out);
        if (first_leaf < 0) first_leaf = l;
    }
    int idx = int(out.labels.size());
    if (first_leaf < 0) first_leaf = idx;
    out.labels.push_back(t.label);
    out.lml.push_back(first_leaf);
    return first_leaf;
}

inline std::vector<int> ted_keyroots(const TedNodes& t) {
    std::map<int, int> last;  // lml value -> highest postorder index
    for (int i = 0; i < int(t.lml.size()); ++i) last[t.lml[std::size_t(i)]] = i;
    std::vector<int> kr;
    for (const auto& [_, i] : last) kr.push_back(i);
    std::sort(kr.begin(), kr.end());
    return kr;
}

} // namespace detail

// Zhang–Shasha ordered tree edit distance with unit insert/delete/rename.
inline std::size_t tree_edit_distance(const LabelTree& a, const LabelTree& b) {
    detail::TedNodes t1, t2;
    detail::ted_flatten(a, t1);
    detail::ted_flatten(b, t2);
    const int n1 = int(t1.labels.size()), n2 = int(t2.labels.size());
    std::vector<std::vector<std::size_t>> td(std::size_t(n1), std::vector<std::size_t>(std::size_t(n2), 0));
    auto kr1 = detail::ted_keyroots(t1);
    auto kr2 = detail::ted_keyroots(t2);

    std::vector<std::vector<std::size_t>> fd;
    for (int i : kr1) {
        for (int j : kr2) {
            const int li = t1.lml[std::size_t(i)], lj = t2.lml[std::size_t(j)];
            const int m = i - li + 2, n = j - lj + 2;
            fd.assign(std::size_t(m), std::vector<std::size_t>(std::size_t(n), 0));
            for (int di = 1; di < m; ++di) fd[std::size_t(di)][0] = fd[std::size_t(di - 1)][0] + 1;
            for (int dj = 1; dj < n; ++dj) fd[0][std::size_t(dj)] = fd[0][std::size_t(dj - 1)] + 1;
            for (int di = 1; di < m; ++di) {
                for (int dj = 1; dj < n; ++dj) {
                    const int i1 = li + di - 1, j1 = lj + dj - 1;
                    const std::size_t del = fd[std::size_t(di - 1)][std::size_t(dj)] + 1;
                    const std::size_t ins = fd[std::size_t(di)][std::size_t(dj - 1)] + 1;
                    if (t1.lml[std::size_t(i1)] == li && t2.lml[std::size_t(j1)] == lj) {
                        const std::size_t ren =
                            fd[std::size_t(di - 1)][std::size_t(dj - 1)] +
                            (t1.labels[std::size_t(i1)] == t2.labels[std::size_t(j1)] ? 0 : 1);
                        fd[std::size_t(di)][std::size_t(dj)] = std::min({del, ins, ren});
                        td[std::size_t(i1)][std::size_t(j1)] = fd[std::size_t(di)][std::size_t(dj)];
                    } else {
                        const std::size_t sub =
                            fd[std::size_t(t1.lml[std::size_t(i1)] - li)]
                              [std::size_t(t2.lml[std::size_t(j1)] - lj)] +
                            td[std::size_t(i1)][std::size_t(j1)];
                        fd[std::size_t(di)][std::size_t(dj)] = std::min({del, ins, sub});
                    }
                }
            }
        }
    }
    return td[std::size_t(n1 - 1)][std::size_t(n2 - 1)];
}

} // namespace scv

#endif
