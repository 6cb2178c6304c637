#ifndef TSS_CWEXPR_HPP
#define TSS_CWEXPR_HPP

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tss/errors.hpp"
#include "tss/graph.hpp"

namespace tss {

enum class ExprKind : std::uint8_t { Vertex, Union, Eta, Rho };

/// Immutable clique-width expression tree with named labels.
///
/// Four constructors mirror the four operations: introduce a labeled vertex,
/// disjoint union, join two label classes (eta), and relabel (rho). Subtrees are
/// shared, so copies are cheap.
class CwExpr {
public:
    static CwExpr vertex(long long id, std::string label) {
        if (id < 1) throw InputError("vertex ids must be positive");
        return CwExpr(std::make_shared<Node>(Node{ExprKind::Vertex, id, std::move(label), {}, {}, {}}));
    }

    static CwExpr unite(CwExpr left, CwExpr right) {
        return CwExpr(std::make_shared<Node>(
            Node{ExprKind::Union, 0, {}, {}, std::move(left.node_), std::move(right.node_)}));
    }

    static CwExpr join(std::string a, std::string b, CwExpr child) {
        if (a == b) throw InputError("join labels must differ (" + a + ")");
        return CwExpr(std::make_shared<Node>(
            Node{ExprKind::Eta, 0, std::move(a), std::move(b), std::move(child.node_), {}}));
    }

    static CwExpr relabel(std::string from, std::string to, CwExpr child) {
        if (from == to) throw InputError("relabel labels must differ (" + from + ")");
        return CwExpr(std::make_shared<Node>(
            Node{ExprKind::Rho, 0, std::move(from), std::move(to), std::move(child.node_), {}}));
    }

    ExprKind kind() const noexcept { return node_->kind; }
    long long vertex_id() const noexcept { return node_->id; }
    /// Vertex label, eta's first label, or rho's source label.
    const std::string& first_label() const noexcept { return node_->a; }
    /// Eta's second label or rho's target label.
    const std::string& second_label() const noexcept { return node_->b; }
    CwExpr child() const { return CwExpr(node_->left); }
    CwExpr left() const { return CwExpr(node_->left); }
    CwExpr right() const { return CwExpr(node_->right); }

    friend bool operator==(const CwExpr& x, const CwExpr& y) { return equal(x.node_.get(), y.node_.get()); }

private:
    struct Node {
        ExprKind kind;
        long long id;
        std::string a;
        std::string b;
        std::shared_ptr<const Node> left;
        std::shared_ptr<const Node> right;
    };

    explicit CwExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    static bool equal(const Node* x, const Node* y) {
        if (x == y) return true;
        if (!x || !y) return false;
        return x->kind == y->kind && x->id == y->id && x->a == y->a && x->b == y->b &&
               equal(x->left.get(), y->left.get()) && equal(x->right.get(), y->right.get());
    }

    std::shared_ptr<const Node> node_;
};

// ---------------------------------------------------------------------------
// Serialization and parsing of the .cwe s-expression syntax.

namespace detail {

inline void write_expr(const CwExpr& e, std::string& out, bool pretty, int depth) {
    if (pretty && depth > 0) {
        out += '\n';
        out.append(static_cast<std::size_t>(depth) * 2, ' ');
    } else if (depth > 0) {
        out += ' ';
    }
    switch (e.kind()) {
        case ExprKind::Vertex:
            out += "(v " + std::to_string(e.vertex_id()) + " " + e.first_label() + ")";
            return;
        case ExprKind::Union:
            out += "(u";
            write_expr(e.left(), out, pretty, depth + 1);
            write_expr(e.right(), out, pretty, depth + 1);
            break;
        case ExprKind::Eta:
        case ExprKind::Rho:
            out += e.kind() == ExprKind::Eta ? "(eta " : "(rho ";
            out += e.first_label() + " " + e.second_label();
            write_expr(e.child(), out, pretty, depth + 1);
            break;
    }
    out += ')';
}

class ExprParser {
public:
    explicit ExprParser(std::string_view text) : text_(text) {}

    CwExpr parse_document() {
        CwExpr e = parse_expr();
        skip_space();
        if (pos_ < text_.size()) fail("trailing input after expression");
        return e;
    }

private:
    struct Token {
        std::string text;
        int line;
        int column;
    };

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line_, column_); }
    [[noreturn]] static void fail_at(const std::string& msg, const Token& t) { throw ParseError(msg, t.line, t.column); }

    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    void skip_space() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == ';') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    void expect(char c) {
        skip_space();
        if (pos_ >= text_.size()) fail(std::string("expected '") + c + "' but reached end of input");
        if (text_[pos_] != c) fail(std::string("expected '") + c + "'");
        advance();
    }

    Token atom() {
        skip_space();
        Token t{{}, line_, column_};
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '(' || c == ')' || c == ';' || std::isspace(static_cast<unsigned char>(c))) break;
            t.text += c;
            advance();
        }
        if (t.text.empty()) fail(pos_ < text_.size() ? "expected an atom" : "unexpected end of input");
        return t;
    }

    static bool is_label(const std::string& s) {
        if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
        return std::all_of(s.begin(), s.end(),
                           [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
    }

    std::string label() {
        Token t = atom();
        if (!is_label(t.text)) fail_at("invalid label '" + t.text + "'", t);
        return t.text;
    }

    long long vertex_id() {
        Token t = atom();
        bool digits = std::all_of(t.text.begin(), t.text.end(),
                                  [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
        if (!digits || t.text.size() > 12 || std::stoll(t.text) < 1)
            fail_at("invalid vertex id '" + t.text + "'", t);
        return std::stoll(t.text);
    }

    CwExpr parse_expr() {
        expect('(');
        Token op = atom();
        CwExpr result = [&] {
            if (op.text == "v") {
                long long id = vertex_id();
                return CwExpr::vertex(id, label());
            }
            if (op.text == "u") {
                CwExpr l = parse_expr();
                return CwExpr::unite(std::move(l), parse_expr());
            }
            if (op.text == "eta" || op.text == "rho") {
                std::string a = label();
                std::string b = label();
                if (a == b)
                    fail_at(op.text == "eta" ? "join labels must differ" : "relabel labels must differ", op);
                CwExpr child = parse_expr();
                return op.text == "eta" ? CwExpr::join(a, b, std::move(child))
                                        : CwExpr::relabel(a, b, std::move(child));
            }
            fail_at("unknown operation '" + op.text + "'", op);
        }();
        expect(')');
        return result;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
};

}  // namespace detail

inline std::string serialize(const CwExpr& e, bool pretty = false) {
    std::string out;
    detail::write_expr(e, out, pretty, 0);
    return out;
}

// ---------------------------------------------------------------------------
// Indexed form: flat post-order node array with interned labels.

using LabelId = std::uint16_t;
using NodeId = std::uint32_t;

struct ExprNode {
    ExprKind kind;
    LabelId a = 0;  ///< vertex label, eta first label, rho source
    LabelId b = 0;  ///< eta second label, rho target
    Vertex vertex = 0;
    NodeId left = 0;  ///< child for eta/rho
    NodeId right = 0;
    NodeId parent = 0;
};

/// Flattened, validated view of an expression. Children precede parents and the
/// root is the last node. Labels are numbered by first appearance in pre-order.
class IndexedExpr {
public:
    explicit IndexedExpr(const CwExpr& e) : source_(e) {
        intern_labels(e);
        flatten(e);
        nodes_.back().parent = root();
        for (const auto& [id, count] : id_count_) {
            if (count > 1) throw InputError("vertex id " + std::to_string(id) + " introduced more than once");
            if (static_cast<std::size_t>(id) > id_count_.size())
                throw InputError("vertex ids must be exactly 1..n; found " + std::to_string(id) + " with n = " +
                                 std::to_string(id_count_.size()));
        }
        vertex_node_.assign(id_count_.size(), 0);
        for (NodeId i = 0; i < nodes_.size(); ++i)
            if (nodes_[i].kind == ExprKind::Vertex) vertex_node_[nodes_[i].vertex] = i;
    }

    const CwExpr& source() const noexcept { return source_; }
    std::size_t size() const noexcept { return nodes_.size(); }
    NodeId root() const noexcept { return static_cast<NodeId>(nodes_.size() - 1); }
    const ExprNode& operator[](NodeId i) const { return nodes_.at(i); }
    std::size_t vertex_count() const noexcept { return vertex_node_.size(); }
    std::size_t label_count() const noexcept { return label_names_.size(); }
    const std::string& label_name(LabelId l) const { return label_names_.at(l); }
    const std::vector<std::string>& label_names() const noexcept { return label_names_; }
    NodeId vertex_node(Vertex v) const { return vertex_node_.at(v); }

    LabelId label_id(const std::string& name) const {
        auto it = label_index_.find(name);
        if (it == label_index_.end()) throw InputError("unknown label " + name);
        return it->second;
    }

    /// Vertices introduced inside the subtree of `node`.
    std::vector<Vertex> subtree_vertices(NodeId node) const {
        std::vector<Vertex> out;
        std::vector<NodeId> stack{node};
        while (!stack.empty()) {
            const ExprNode& n = nodes_[stack.back()];
            stack.pop_back();
            switch (n.kind) {
                case ExprKind::Vertex: out.push_back(n.vertex); break;
                case ExprKind::Union:
                    stack.push_back(n.right);
                    stack.push_back(n.left);
                    break;
                default: stack.push_back(n.left);
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    /// Label of vertex v as seen in G(node); v must belong to node's subtree.
    LabelId label_at(Vertex v, NodeId node) const {
        NodeId cur = vertex_node_.at(v);
        LabelId l = nodes_[cur].a;
        while (cur != node) {
            if (cur == root()) throw InputError("vertex not in subexpression");
            cur = nodes_[cur].parent;
            if (nodes_[cur].kind == ExprKind::Rho && nodes_[cur].a == l) l = nodes_[cur].b;
        }
        return l;
    }

    /// Label classes of G(node), each sorted by vertex index.
    std::vector<std::vector<Vertex>> classes_at(NodeId node) const {
        std::vector<std::vector<Vertex>> out(label_count());
        for (Vertex v : subtree_vertices(node)) out[label_at(v, node)].push_back(v);
        return out;
    }

    /// Child-index path from the root, e.g. "root/0/1".
    std::string path(NodeId node) const {
        std::vector<int> steps;
        for (NodeId cur = node; cur != root(); cur = nodes_[cur].parent) {
            const ExprNode& p = nodes_[nodes_[cur].parent];
            steps.push_back(p.kind == ExprKind::Union && p.right == cur ? 1 : 0);
        }
        std::string out = "root";
        for (auto it = steps.rbegin(); it != steps.rend(); ++it) out += "/" + std::to_string(*it);
        return out;
    }

private:
    void intern_labels(const CwExpr& root) {
        std::vector<CwExpr> stack{root};
        auto add = [&](const std::string& name) {
            if (label_index_.contains(name)) return;
            if (label_names_.size() >= 0xFFFF) throw InputError("too many labels");
            label_index_.emplace(name, static_cast<LabelId>(label_names_.size()));
            label_names_.push_back(name);
        };
        while (!stack.empty()) {
            CwExpr e = stack.back();
            stack.pop_back();
            switch (e.kind()) {
                case ExprKind::Vertex: add(e.first_label()); break;
                case ExprKind::Union:
                    stack.push_back(e.right());
                    stack.push_back(e.left());
                    break;
                default:
                    add(e.first_label());
                    add(e.second_label());
                    stack.push_back(e.child());
            }
        }
    }

    NodeId flatten(const CwExpr& e) {
        ExprNode n{e.kind()};
        switch (e.kind()) {
            case ExprKind::Vertex:
                n.a = label_index_.at(e.first_label());
                n.vertex = from_external(e.vertex_id());
                ++id_count_[e.vertex_id()];
                break;
            case ExprKind::Union:
                n.left = flatten(e.left());
                n.right = flatten(e.right());
                break;
            default:
                n.a = label_index_.at(e.first_label());
                n.b = label_index_.at(e.second_label());
                n.left = flatten(e.child());
        }
        nodes_.push_back(n);
        NodeId self = static_cast<NodeId>(nodes_.size() - 1);
        if (e.kind() != ExprKind::Vertex) nodes_[n.left].parent = self;
        if (e.kind() == ExprKind::Union) nodes_[n.right].parent = self;
        return self;
    }

    CwExpr source_;
    std::vector<ExprNode> nodes_;
    std::vector<std::string> label_names_;
    std::unordered_map<std::string, LabelId> label_index_;
    std::unordered_map<long long, int> id_count_;
    std::vector<NodeId> vertex_node_;
};

/// Parses .cwe text and validates the result (unique ids 1..n, distinct labels).
inline CwExpr parse_expr(std::string_view text) {
    CwExpr e = detail::ExprParser(text).parse_document();
    IndexedExpr check(e);
    return e;
}

// ---------------------------------------------------------------------------
// Evaluation.

struct LabeledGraph {
    Graph graph;
    std::vector<LabelId> label;            ///< final label per vertex
    std::vector<std::string> label_names;  ///< indexed by LabelId

    friend bool operator==(const LabeledGraph&, const LabeledGraph&) = default;
};

/// One eta node that joins classes which already share an edge.
struct RedundantJoin {
    NodeId node;
    std::string path;
    std::size_t existing_edges;
    std::size_t possible_edges;  ///< |alpha class| * |beta class|

    bool total() const noexcept { return existing_edges == possible_edges; }
};

namespace detail {

/// Evaluates bottom-up; reports every eta whose classes already share edges.
inline LabeledGraph evaluate_indexed(const IndexedExpr& ix, std::vector<RedundantJoin>* redundant) {
    LabeledGraph out{Graph(ix.vertex_count()), std::vector<LabelId>(ix.vertex_count()), ix.label_names()};
    std::vector<std::vector<Vertex>> members(ix.size());
    for (NodeId i = 0; i < ix.size(); ++i) {
        const ExprNode& n = ix[i];
        switch (n.kind) {
            case ExprKind::Vertex:
                out.label[n.vertex] = n.a;
                members[i] = {n.vertex};
                break;
            case ExprKind::Union:
                members[i] = std::move(members[n.left]);
                members[i].insert(members[i].end(), members[n.right].begin(), members[n.right].end());
                members[n.right].clear();
                members[n.right].shrink_to_fit();
                break;
            case ExprKind::Rho:
                members[i] = std::move(members[n.left]);
                for (Vertex v : members[i])
                    if (out.label[v] == n.a) out.label[v] = n.b;
                break;
            case ExprKind::Eta: {
                members[i] = std::move(members[n.left]);
                std::vector<Vertex> xs, ys;
                for (Vertex v : members[i]) {
                    if (out.label[v] == n.a) xs.push_back(v);
                    if (out.label[v] == n.b) ys.push_back(v);
                }
                std::size_t existing = 0;
                for (Vertex x : xs)
                    for (Vertex y : ys) existing += out.graph.has_edge(x, y) ? 1 : 0;
                if (existing > 0 && redundant)
                    redundant->push_back({i, ix.path(i), existing, xs.size() * ys.size()});
                for (Vertex x : xs)
                    for (Vertex y : ys)
                        if (!out.graph.has_edge(x, y)) out.graph.add_edge(x, y);
                break;
            }
        }
    }
    return out;
}

}  // namespace detail

/// The labeled graph G(e).
inline LabeledGraph evaluate(const CwExpr& e) { return detail::evaluate_indexed(IndexedExpr(e), nullptr); }

/// Eta nodes joining classes that already share at least one edge; empty means irredundant.
inline std::vector<RedundantJoin> check_irredundant(const CwExpr& e) {
    std::vector<RedundantJoin> out;
    detail::evaluate_indexed(IndexedExpr(e), &out);
    return out;
}

/// Removes every eta whose edges all exist already. Throws UnsupportedExpression
/// when an eta adds only part of its edges.
inline CwExpr normalize(const CwExpr& e) {
    IndexedExpr ix(e);
    auto redundant = check_irredundant(e);
    std::vector<bool> drop(ix.size(), false);
    for (const auto& r : redundant) {
        if (!r.total())
            throw UnsupportedExpression("partially redundant join at " + r.path + ": " +
                                        std::to_string(r.existing_edges) + " of " +
                                        std::to_string(r.possible_edges) + " edges already present");
        drop[r.node] = true;
    }
    std::vector<CwExpr> built(ix.size(), CwExpr::vertex(1, "a"));
    for (NodeId i = 0; i < ix.size(); ++i) {
        const ExprNode& n = ix[i];
        switch (n.kind) {
            case ExprKind::Vertex:
                built[i] = CwExpr::vertex(to_external(n.vertex), ix.label_name(n.a));
                break;
            case ExprKind::Union: built[i] = CwExpr::unite(built[n.left], built[n.right]); break;
            case ExprKind::Eta:
                built[i] = drop[i] ? built[n.left]
                                   : CwExpr::join(ix.label_name(n.a), ix.label_name(n.b), built[n.left]);
                break;
            case ExprKind::Rho:
                built[i] = CwExpr::relabel(ix.label_name(n.a), ix.label_name(n.b), built[n.left]);
                break;
        }
    }
    return built[ix.root()];
}

// ---------------------------------------------------------------------------
// Per-node label statistics.

/// Label counts and threshold histograms for every node of an indexed expression.
///
/// tamount(l) = min(t_max + 1, count(l)) is the number of tuples a complete local
/// ordering holds for label l; that(l) = min(t_max, count(l)).
class NodeStats {
public:
    NodeStats(const IndexedExpr& ix, const ThresholdMap& thr)
        : labels_(ix.label_count()), t_max_(thr.t_max()), nodes_(ix.size()) {
        if (thr.size() < ix.vertex_count())
            throw InputError("vertex " + std::to_string(thr.size() + 1) + " has no threshold");
        const std::size_t width = labels_ * bins();
        hist_.assign(nodes_ * width, 0);
        max_thr_.assign(nodes_ * labels_, 0);
        for (NodeId i = 0; i < nodes_; ++i) {
            const ExprNode& n = ix[i];
            auto* h = &hist_[i * width];
            switch (n.kind) {
                case ExprKind::Vertex: h[n.a * bins() + thr[n.vertex]] = 1; break;
                case ExprKind::Union: {
                    const auto* l = &hist_[n.left * width];
                    const auto* r = &hist_[n.right * width];
                    for (std::size_t k = 0; k < width; ++k) h[k] = l[k] + r[k];
                    break;
                }
                case ExprKind::Eta: std::copy_n(&hist_[n.left * width], width, h); break;
                case ExprKind::Rho: {
                    std::copy_n(&hist_[n.left * width], width, h);
                    for (std::size_t t = 0; t < bins(); ++t) {
                        h[n.b * bins() + t] += h[n.a * bins() + t];
                        h[n.a * bins() + t] = 0;
                    }
                    break;
                }
            }
            for (LabelId l = 0; l < labels_; ++l) {
                std::uint32_t c = 0;
                int mx = 0;
                for (std::size_t t = 0; t < bins(); ++t) {
                    c += h[l * bins() + t];
                    if (h[l * bins() + t] > 0) mx = static_cast<int>(t);
                }
                counts_.push_back(c);
                max_thr_[i * labels_ + l] = static_cast<std::uint8_t>(mx);
            }
        }
    }

    int t_max() const noexcept { return t_max_; }
    std::size_t label_count() const noexcept { return labels_; }

    std::uint32_t count(NodeId node, LabelId l) const { return counts_[node * labels_ + l]; }
    int tamount(NodeId node, LabelId l) const {
        return static_cast<int>(std::min<std::uint32_t>(static_cast<std::uint32_t>(t_max_) + 1, count(node, l)));
    }
    int that(NodeId node, LabelId l) const {
        return static_cast<int>(std::min<std::uint32_t>(static_cast<std::uint32_t>(t_max_), count(node, l)));
    }
    /// Number of vertices of label l with threshold t in G(node).
    std::uint32_t threshold_count(NodeId node, LabelId l, int t) const {
        return hist_[(node * labels_ + l) * bins() + static_cast<std::size_t>(t)];
    }
    /// Largest threshold among vertices of label l in G(node); 0 for an empty class.
    int max_threshold(NodeId node, LabelId l) const { return max_thr_[node * labels_ + l]; }

private:
    std::size_t bins() const noexcept { return static_cast<std::size_t>(t_max_) + 1; }

    std::size_t labels_;
    int t_max_;
    std::size_t nodes_;
    std::vector<std::uint32_t> hist_;
    std::vector<std::uint32_t> counts_;
    std::vector<std::uint8_t> max_thr_;
};

// ---------------------------------------------------------------------------
// Builders for test corpora. Every result is irredundant.

/// One label per vertex and one join per edge; width n.
inline CwExpr build_naive(const Graph& g) {
    auto name = [](Vertex v) { return "x" + std::to_string(to_external(v)); };
    if (g.vertex_count() == 0) throw InputError("graph has no vertices");
    CwExpr e = CwExpr::vertex(1, name(0));
    for (Vertex v = 1; v < g.vertex_count(); ++v) e = CwExpr::unite(e, CwExpr::vertex(to_external(v), name(v)));
    for (auto [u, v] : g.edges()) e = CwExpr::join(name(u), name(v), e);
    return e;
}

/// Path 1-2-...-n with three labels: the current end is "a", the new vertex "b",
/// finished vertices "c".
inline CwExpr build_path(int n) {
    if (n < 1) throw InputError("path needs at least one vertex");
    CwExpr e = CwExpr::vertex(1, "a");
    for (int i = 2; i <= n; ++i) {
        e = CwExpr::join("a", "b", CwExpr::unite(e, CwExpr::vertex(i, "b")));
        e = CwExpr::relabel("b", "a", CwExpr::relabel("a", "c", e));
    }
    return e;
}

/// Complete graph on n vertices with two labels.
inline CwExpr build_clique(int n) {
    if (n < 1) throw InputError("clique needs at least one vertex");
    CwExpr e = CwExpr::vertex(1, "a");
    for (int i = 2; i <= n; ++i)
        e = CwExpr::relabel("b", "a", CwExpr::join("a", "b", CwExpr::unite(e, CwExpr::vertex(i, "b"))));
    return e;
}

/// K_{a,b}: vertices 1..a on one side, a+1..a+b on the other.
inline CwExpr build_complete_bipartite(int a, int b) {
    if (a < 1 || b < 1) throw InputError("both sides of a biclique need at least one vertex");
    CwExpr e = CwExpr::vertex(1, "a");
    for (int i = 2; i <= a; ++i) e = CwExpr::unite(e, CwExpr::vertex(i, "a"));
    for (int i = 1; i <= b; ++i) e = CwExpr::unite(e, CwExpr::vertex(a + i, "b"));
    return CwExpr::join("a", "b", e);
}

}  // namespace tss

#endif
