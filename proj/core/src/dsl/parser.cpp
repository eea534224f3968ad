#include "hybridsim/dsl/parser.hpp"

#include <set>

#include "hybridsim/dsl/lexer.hpp"

namespace hybridsim::dsl {

namespace x = hybridsim::kernel::expr;
using kernel::ExprPtr;

namespace {

const std::set<std::string>& keywords() {
    static const std::set<std::string> words{
        "component", "system",    "var",     "ref",      "share",
        "msgbox",    "hook",      "automaton", "state",  "init",
        "trans",     "law",       "expo",    "inst",     "when",
        "notify",    "export",    "import",  "as",       "instance",
        "connect",   "mediator",  "subject", "active",   "role",
        "requires",  "observes",  "expose",  "chain",    "pdmp",
        "ode",       "eq",        "stop",    "start",    "include",
        "and",       "or",        "not",     "true",     "false",
        "sum",       "any",       "count",   "over",     "upstream_failed",
        "set",       "number",    "bool",    "continuous",
        "chain_failure", "chain_repair",
    };
    return words;
}

class Parser {
public:
    Parser(std::vector<Token> tokens, std::string file)
        : tokens_(std::move(tokens)), file_(std::move(file)) {}

    ModelFile parse_file() {
        ModelFile result;
        while (!at_end()) {
            if (accept_keyword("include")) {
                result.includes.push_back(expect_string());
                expect_symbol(";");
            } else if (peek_keyword("component")) {
                result.components.push_back(parse_component());
            } else if (peek_keyword("role")) {
                result.roles.push_back(parse_role());
            } else if (peek_keyword("system")) {
                result.systems.push_back(parse_system());
            } else {
                fail("expected include, component, role, or system");
            }
        }
        return result;
    }

    ExprPtr parse_whole_expression() {
        ExprPtr e = parse_expr();
        if (!at_end())
            fail("trailing input after the expression");
        return e;
    }

private:
    // ------------------------------------------------------------------
    // Token plumbing
    // ------------------------------------------------------------------

    [[nodiscard]] const Token& peek(std::size_t ahead = 0) const {
        std::size_t index = position_ + ahead;
        if (index >= tokens_.size())
            index = tokens_.size() - 1;
        return tokens_[index];
    }

    [[nodiscard]] bool at_end() const { return peek().kind == TokenKind::End; }

    [[noreturn]] void fail(const std::string& message) const {
        const Token& token = peek();
        std::string found;
        switch (token.kind) {
        case TokenKind::End: found = "end of file"; break;
        case TokenKind::String: found = "string \"" + token.text + "\""; break;
        default: found = "'" + token.text + "'"; break;
        }
        throw ParseError(file_, token.line, token.column,
                         message + " (found " + found + ")");
    }

    [[nodiscard]] bool peek_symbol(const std::string& text,
                                   std::size_t ahead = 0) const {
        const Token& token = peek(ahead);
        return token.kind == TokenKind::Symbol && token.text == text;
    }

    [[nodiscard]] bool peek_keyword(const std::string& word,
                                    std::size_t ahead = 0) const {
        const Token& token = peek(ahead);
        return token.kind == TokenKind::Identifier && token.text == word;
    }

    bool accept_symbol(const std::string& text) {
        if (!peek_symbol(text))
            return false;
        ++position_;
        return true;
    }

    bool accept_keyword(const std::string& word) {
        if (!peek_keyword(word))
            return false;
        ++position_;
        return true;
    }

    void expect_symbol(const std::string& text) {
        if (!accept_symbol(text))
            fail("expected '" + text + "'");
    }

    void expect_keyword(const std::string& word) {
        if (!accept_keyword(word))
            fail("expected '" + word + "'");
    }

    std::string expect_identifier(const std::string& what) {
        const Token& token = peek();
        if (token.kind != TokenKind::Identifier)
            fail("expected " + what);
        if (keywords().count(token.text))
            fail("expected " + what + ", not the reserved word '" + token.text
                 + "'");
        ++position_;
        return token.text;
    }

    std::string expect_string() {
        const Token& token = peek();
        if (token.kind != TokenKind::String)
            fail("expected a quoted path");
        ++position_;
        return token.text;
    }

    std::vector<std::string> identifier_list(const std::string& what) {
        std::vector<std::string> names;
        names.push_back(expect_identifier(what));
        while (accept_symbol(","))
            names.push_back(expect_identifier(what));
        return names;
    }

    // ------------------------------------------------------------------
    // Components
    // ------------------------------------------------------------------

    kernel::ValueType parse_parameter_type() {
        if (accept_keyword("number"))
            return kernel::ValueType::Number;
        if (accept_keyword("bool"))
            return kernel::ValueType::Boolean;
        fail("expected 'number' or 'bool'");
    }

    SurfaceType parse_variable_type() {
        if (accept_keyword("number"))
            return SurfaceType::Number;
        if (accept_keyword("bool"))
            return SurfaceType::Boolean;
        if (accept_keyword("continuous"))
            return SurfaceType::Continuous;
        fail("expected 'number', 'bool', or 'continuous'");
    }

    AstComponent parse_component() {
        expect_keyword("component");
        AstComponent component;
        component.name = expect_identifier("a component name");
        if (accept_symbol("(")) {
            if (!peek_symbol(")")) {
                do {
                    AstParameter parameter;
                    parameter.name = expect_identifier("a parameter name");
                    expect_symbol(":");
                    parameter.type = parse_parameter_type();
                    if (accept_symbol("="))
                        parameter.default_value = parse_expr();
                    component.parameters.push_back(std::move(parameter));
                } while (accept_symbol(","));
            }
            expect_symbol(")");
        }
        expect_symbol("{");
        while (!accept_symbol("}")) {
            if (peek_keyword("var"))
                component.variables.push_back(parse_variable());
            else if (accept_keyword("ref")) {
                component.references.push_back({expect_identifier("a reference name")});
                expect_symbol(";");
            } else if (accept_keyword("share")) {
                AstShare share;
                share.name = expect_identifier("a share name");
                expect_symbol("=");
                share.value = parse_expr();
                expect_symbol(";");
                component.shares.push_back(std::move(share));
            } else if (peek_keyword("msgbox"))
                component.message_boxes.push_back(parse_message_box());
            else if (peek_keyword("hook"))
                component.hooks.push_back(parse_hook());
            else if (peek_keyword("automaton"))
                component.automata.push_back(parse_automaton());
            else
                fail("expected var, ref, share, msgbox, hook, automaton, or '}'");
        }
        return component;
    }

    AstVariable parse_variable() {
        expect_keyword("var");
        AstVariable variable;
        variable.name = expect_identifier("a variable name");
        expect_symbol(":");
        variable.type = parse_variable_type();
        if (accept_symbol("="))
            variable.initial = parse_expr();
        expect_symbol(";");
        return variable;
    }

    AstMessageBox parse_message_box() {
        expect_keyword("msgbox");
        AstMessageBox box;
        box.name = expect_identifier("a message box name");
        expect_symbol("{");
        while (!accept_symbol("}")) {
            if (accept_keyword("export")) {
                AstExport item;
                item.value = parse_expr();
                expect_keyword("as");
                item.label = expect_identifier("an export label");
                expect_symbol(";");
                box.exports.push_back(std::move(item));
            } else if (accept_keyword("import")) {
                AstImport item;
                item.label = expect_identifier("an import label");
                expect_symbol("->");
                item.reference = expect_identifier("a reference name");
                expect_symbol(";");
                box.imports.push_back(std::move(item));
            } else {
                fail("expected export, import, or '}'");
            }
        }
        return box;
    }

    AstHook parse_hook() {
        expect_keyword("hook");
        AstHook hook;
        hook.name = expect_identifier("a hook name");
        if (accept_keyword("chain_failure") || peek_keyword("chain_repair")) {
            bool repair = accept_keyword("chain_repair");
            hook.kind = repair ? kernel::HookKind::ChainRepair
                               : kernel::HookKind::ChainFailure;
            expect_symbol("(");
            hook.flag_variable = expect_identifier("a flag variable");
            expect_symbol(")");
            expect_symbol(";");
            return hook;
        }
        hook.kind = kernel::HookKind::Assign;
        expect_symbol("{");
        while (!accept_symbol("}")) {
            expect_keyword("set");
            std::string variable = expect_identifier("a variable name");
            expect_symbol("=");
            ExprPtr value = parse_expr();
            expect_symbol(";");
            hook.assignments.emplace_back(std::move(variable), std::move(value));
        }
        return hook;
    }

    AstAutomaton parse_automaton() {
        expect_keyword("automaton");
        AstAutomaton automaton;
        automaton.name = expect_identifier("an automaton name");
        expect_symbol("{");
        expect_keyword("state");
        automaton.states = identifier_list("a state name");
        expect_symbol(";");
        expect_keyword("init");
        automaton.initial_state = expect_identifier("the initial state");
        expect_symbol(";");
        while (!accept_symbol("}")) {
            expect_keyword("trans");
            AstTransition transition;
            transition.source = expect_identifier("a source state");
            expect_symbol("->");
            transition.target = expect_identifier("a target state");
            expect_keyword("law");
            if (accept_keyword("expo"))
                transition.law = kernel::LawKind::Exponential;
            else if (accept_keyword("inst"))
                transition.law = kernel::LawKind::Instantaneous;
            else
                fail("expected 'expo' or 'inst'");
            expect_symbol("(");
            transition.law_parameter = parse_expr();
            expect_symbol(")");
            if (accept_keyword("when"))
                transition.condition = parse_expr();
            if (accept_keyword("notify"))
                transition.notify = identifier_list("a hook name");
            expect_symbol(";");
            automaton.transitions.push_back(std::move(transition));
        }
        return automaton;
    }

    // ------------------------------------------------------------------
    // Roles and systems
    // ------------------------------------------------------------------

    AstRoleContract parse_role() {
        expect_keyword("role");
        AstRoleContract role;
        role.name = expect_identifier("a role name");
        expect_symbol("{");
        while (!accept_symbol("}")) {
            if (accept_keyword("requires")) {
                role.required_shares.push_back(expect_identifier("a share name"));
                expect_symbol(";");
            } else if (accept_keyword("observes")) {
                role.observed.push_back(expect_identifier("a reference name"));
                expect_symbol(";");
            } else {
                fail("expected requires, observes, or '}'");
            }
        }
        return role;
    }

    AstSystem parse_system() {
        expect_keyword("system");
        AstSystem system;
        system.name = expect_identifier("a system name");
        expect_symbol("{");
        while (!accept_symbol("}")) {
            if (accept_keyword("instance")) {
                AstInstance instance;
                instance.name = expect_identifier("an instance name");
                expect_symbol(":");
                instance.type = expect_identifier("a component type");
                if (accept_symbol("(") && !accept_symbol(")")) {
                    bool named_seen = false;
                    do {
                        AstArgument argument;
                        if (peek().kind == TokenKind::Identifier
                            && !keywords().count(peek().text)
                            && peek_symbol("=", 1)) {
                            argument.name = expect_identifier("an argument name");
                            expect_symbol("=");
                            named_seen = true;
                        } else if (named_seen) {
                            fail("positional arguments may not follow named ones");
                        }
                        argument.value = parse_expr();
                        instance.arguments.push_back(std::move(argument));
                    } while (accept_symbol(","));
                    expect_symbol(")");
                }
                expect_symbol(";");
                system.instances.push_back(std::move(instance));
            } else if (accept_keyword("connect")) {
                AstConnect connect;
                connect.a_instance = expect_identifier("an instance name");
                expect_symbol(".");
                connect.a_box = expect_identifier("a message box name");
                expect_symbol(",");
                connect.b_instance = expect_identifier("an instance name");
                expect_symbol(".");
                connect.b_box = expect_identifier("a message box name");
                expect_symbol(";");
                system.connects.push_back(std::move(connect));
            } else if (peek_keyword("mediator")) {
                system.mediators.push_back(parse_mediator());
            } else if (accept_keyword("chain")) {
                system.chains.push_back({identifier_list("an instance name")});
                expect_symbol(";");
            } else if (peek_keyword("pdmp")) {
                system.pdmps.push_back(parse_pdmp());
            } else {
                fail("expected instance, connect, mediator, chain, pdmp, or '}'");
            }
        }
        return system;
    }

    AstMediator parse_mediator() {
        expect_keyword("mediator");
        AstMediator mediator;
        mediator.name = expect_identifier("a mediator name");
        expect_symbol("{");
        while (!accept_symbol("}")) {
            if (accept_keyword("subject")) {
                AstSubject subject;
                subject.instance = expect_identifier("an instance name");
                expect_symbol(".");
                subject.variable = expect_identifier("a variable name");
                expect_symbol(";");
                mediator.subjects.push_back(std::move(subject));
            } else if (accept_keyword("active")) {
                AstActive active;
                active.instances = identifier_list("an instance name");
                expect_keyword("role");
                active.role = expect_identifier("a role name");
                expect_symbol(";");
                mediator.actives.push_back(std::move(active));
            } else if (accept_keyword("expose")) {
                AstExposure exposure;
                exposure.name = expect_identifier("an exposure name");
                expect_symbol("=");
                exposure.value = parse_expr();
                expect_symbol(";");
                mediator.exposures.push_back(std::move(exposure));
            } else {
                fail("expected subject, active, expose, or '}'");
            }
        }
        return mediator;
    }

    AstPdmp parse_pdmp() {
        expect_keyword("pdmp");
        AstPdmp pdmp;
        pdmp.name = expect_identifier("a manager name");
        expect_symbol("{");
        while (!accept_symbol("}")) {
            if (accept_keyword("ode")) {
                AstOde ode;
                ode.instance = expect_identifier("an instance name");
                expect_symbol(".");
                ode.variable = expect_identifier("a variable name");
                expect_symbol(";");
                pdmp.odes.push_back(std::move(ode));
            } else if (accept_keyword("eq")) {
                AstEquation equation;
                if (expect_identifier("'d'") != "d")
                    fail("expected 'd'");
                expect_symbol("(");
                equation.instance = expect_identifier("an instance name");
                expect_symbol(".");
                equation.variable = expect_identifier("a variable name");
                expect_symbol(")");
                expect_symbol("/");
                if (expect_identifier("'dt'") != "dt")
                    fail("expected 'dt'");
                expect_symbol("=");
                equation.rhs = parse_expr();
                expect_symbol(";");
                pdmp.equations.push_back(std::move(equation));
            } else if (accept_keyword("stop")) {
                AstStop stop;
                stop.condition = parse_expr();
                expect_symbol(";");
                pdmp.stops.push_back(std::move(stop));
            } else if (accept_keyword("start")) {
                AstStart start;
                start.instance = expect_identifier("an instance name");
                expect_symbol(".");
                start.hook = expect_identifier("a hook name");
                expect_symbol(";");
                pdmp.starts.push_back(std::move(start));
            } else {
                fail("expected ode, eq, stop, start, or '}'");
            }
        }
        return pdmp;
    }

    // ------------------------------------------------------------------
    // Expressions
    // ------------------------------------------------------------------

    ExprPtr parse_expr() { return parse_or(); }

    ExprPtr parse_or() {
        ExprPtr left = parse_and();
        while (accept_keyword("or"))
            left = x::lor(std::move(left), parse_and());
        return left;
    }

    ExprPtr parse_and() {
        ExprPtr left = parse_not();
        while (accept_keyword("and"))
            left = x::land(std::move(left), parse_not());
        return left;
    }

    ExprPtr parse_not() {
        if (accept_keyword("not"))
            return x::lnot(parse_not());
        return parse_comparison();
    }

    ExprPtr parse_comparison() {
        ExprPtr left = parse_additive();
        kernel::BinaryOp op;
        if (accept_symbol("<="))
            op = kernel::BinaryOp::Le;
        else if (accept_symbol(">="))
            op = kernel::BinaryOp::Ge;
        else if (accept_symbol("=="))
            op = kernel::BinaryOp::Eq;
        else if (accept_symbol("!="))
            op = kernel::BinaryOp::Ne;
        else if (accept_symbol("<"))
            op = kernel::BinaryOp::Lt;
        else if (accept_symbol(">"))
            op = kernel::BinaryOp::Gt;
        else
            return left;
        return x::binary(op, std::move(left), parse_additive());
    }

    ExprPtr parse_additive() {
        ExprPtr left = parse_multiplicative();
        for (;;) {
            if (accept_symbol("+"))
                left = x::add(std::move(left), parse_multiplicative());
            else if (accept_symbol("-"))
                left = x::sub(std::move(left), parse_multiplicative());
            else
                return left;
        }
    }

    ExprPtr parse_multiplicative() {
        ExprPtr left = parse_unary();
        for (;;) {
            if (accept_symbol("*"))
                left = x::mul(std::move(left), parse_unary());
            else if (accept_symbol("/"))
                left = x::div(std::move(left), parse_unary());
            else
                return left;
        }
    }

    ExprPtr parse_unary() {
        if (accept_symbol("-"))
            return x::neg(parse_unary());
        return parse_atom();
    }

    ExprPtr parse_aggregate(kernel::AggregateOp op) {
        expect_symbol("(");
        ExprPtr body = parse_expr();
        std::string role;
        if (accept_keyword("over"))
            role = expect_identifier("a role name");
        expect_symbol(")");
        if (role.empty())
            return x::aggregate(op, std::move(body));
        return x::aggregate_over(op, std::move(body), std::move(role));
    }

    ExprPtr parse_atom() {
        const Token& token = peek();
        if (token.kind == TokenKind::Number) {
            ++position_;
            return x::number(token.number_value);
        }
        if (accept_keyword("true"))
            return x::boolean(true);
        if (accept_keyword("false"))
            return x::boolean(false);
        if (accept_symbol("(")) {
            ExprPtr inner = parse_expr();
            expect_symbol(")");
            return inner;
        }
        if (accept_keyword("active")) {
            expect_symbol("(");
            std::string automaton = expect_identifier("an automaton name");
            expect_symbol(".");
            std::string state = expect_identifier("a state name");
            expect_symbol(")");
            return x::active(std::move(automaton), std::move(state));
        }
        if (accept_keyword("upstream_failed"))
            return x::upstream_failed();
        if (accept_keyword("sum"))
            return parse_aggregate(kernel::AggregateOp::Sum);
        if (accept_keyword("any"))
            return parse_aggregate(kernel::AggregateOp::Any);
        if (accept_keyword("count"))
            return parse_aggregate(kernel::AggregateOp::Count);
        if (token.kind == TokenKind::Identifier && !keywords().count(token.text)) {
            ++position_;
            return x::name(token.text);
        }
        fail("expected an expression");
    }

    std::vector<Token> tokens_;
    std::string file_;
    std::size_t position_ = 0;
};

}  // namespace

ModelFile parse_model(const std::string& text, const std::string& file) {
    Parser parser(tokenize(text, file), file);
    return parser.parse_file();
}

kernel::ExprPtr parse_expression(const std::string& text) {
    Parser parser(tokenize(text, "<expression>"), "<expression>");
    return parser.parse_whole_expression();
}

}  // namespace hybridsim::dsl
