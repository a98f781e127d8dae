#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace deslab {

// Boolean expression over signals, stored as a flat node pool.
// Grammar: or := and ('|' and)*; and := unary ('&' unary)*;
//          unary := '!' unary | '(' or ')' | name
class BoolExpr {
public:
    bool eval(const std::vector<std::uint8_t>& values) const;

    // Resolves names to indices through `lookup`, which must throw on
    // unknown names. `line` is used for error reporting only.
    static BoolExpr parse(const std::string& text,
                          const std::function<std::size_t(const std::string&)>& lookup,
                          int line = 0);

    // Indices of all signals the expression reads.
    std::vector<std::size_t> referenced() const;

private:
    enum class Op : std::uint8_t { Var, Not, And, Or };
    struct Node {
        Op op;
        int a = -1;
        int b = -1;
        std::size_t var = 0;
    };
    std::vector<Node> nodes_;
    int root_ = -1;

    bool eval_node(int idx, const std::vector<std::uint8_t>& values) const;
};

} // namespace deslab
