#include "deslab/expr.hpp"

#include "deslab/error.hpp"

#include <cctype>

namespace deslab {

namespace {

struct Tokenizer {
    const std::string& s;
    std::size_t pos = 0;
    int line;

    void skip_ws() {
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }

    std::string name() {
        skip_ws();
        std::size_t start = pos;
        while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
            ++pos;
        if (pos == start)
            throw Error("parse", "line " + std::to_string(line) + ", col " +
                                     std::to_string(start + 1) + ": expected signal name");
        return s.substr(start, pos - start);
    }
};

} // namespace

bool BoolExpr::eval(const std::vector<std::uint8_t>& values) const {
    return eval_node(root_, values);
}

bool BoolExpr::eval_node(int idx, const std::vector<std::uint8_t>& values) const {
    const Node& n = nodes_[static_cast<std::size_t>(idx)];
    switch (n.op) {
    case Op::Var: return values[n.var] != 0;
    case Op::Not: return !eval_node(n.a, values);
    case Op::And: return eval_node(n.a, values) && eval_node(n.b, values);
    case Op::Or: return eval_node(n.a, values) || eval_node(n.b, values);
    }
    return false;
}

std::vector<std::size_t> BoolExpr::referenced() const {
    std::vector<std::size_t> out;
    for (const Node& n : nodes_)
        if (n.op == Op::Var) out.push_back(n.var);
    return out;
}

// Recursive-descent parser. Node indices refer into nodes_.
namespace {

struct Parser {
    Tokenizer& tok;
    const std::function<std::size_t(const std::string&)>& lookup;
    std::vector<std::tuple<int, int, int, std::size_t>> nodes; // op,a,b,var

    int add(int op, int a, int b, std::size_t var) {
        nodes.emplace_back(op, a, b, var);
        return static_cast<int>(nodes.size()) - 1;
    }

    int parse_or() {
        int lhs = parse_and();
        while (tok.eat('|')) {
            int rhs = parse_and();
            lhs = add(3, lhs, rhs, 0);
        }
        return lhs;
    }

    int parse_and() {
        int lhs = parse_unary();
        while (tok.eat('&')) {
            int rhs = parse_unary();
            lhs = add(2, lhs, rhs, 0);
        }
        return lhs;
    }

    int parse_unary() {
        if (tok.eat('!')) return add(1, parse_unary(), -1, 0);
        if (tok.eat('(')) {
            int inner = parse_or();
            if (!tok.eat(')'))
                throw Error("parse", "line " + std::to_string(tok.line) + ", col " +
                                         std::to_string(tok.pos + 1) + ": expected ')'");
            return inner;
        }
        return add(0, -1, -1, lookup(tok.name()));
    }
};

} // namespace

BoolExpr BoolExpr::parse(const std::string& text,
                         const std::function<std::size_t(const std::string&)>& lookup,
                         int line) {
    Tokenizer tok{text, 0, line};
    Parser p{tok, lookup, {}};
    int root = p.parse_or();
    tok.skip_ws();
    if (tok.pos != text.size())
        throw Error("parse", "line " + std::to_string(line) + ", col " +
                                 std::to_string(tok.pos + 1) + ": trailing input in expression");
    BoolExpr e;
    e.root_ = root;
    e.nodes_.reserve(p.nodes.size());
    for (auto& [op, a, b, var] : p.nodes)
        e.nodes_.push_back(Node{static_cast<Op>(op), a, b, var});
    return e;
}

} // namespace deslab
