#include "trajex/parser.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <unordered_set>

#include "trajex/builtins.hpp"

namespace trajex {

namespace {

enum class Tok : std::uint8_t { Ident, Var, Int, Punct, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    char punct = 0;
    std::int64_t intValue = 0;
    int line = 1;
    int col = 1;
};

const std::unordered_set<std::string> kKeywords = {
    "sort", "param", "pred", "horizon", "init", "rule", "implies", "and", "not",
    "choose", "in", "except", "from", "let", "agg", "sum", "min", "max", "count",
    "observable", "theorem", "split", "by", "to", "false", "time", "number",
    "strictly_decreasing", "strictly_increasing", "non_increasing", "non_decreasing",
};

class Lexer {
  public:
    explicit Lexer(std::string_view text) : text_(text) {}

    Token next() {
        skipWhitespaceAndComments();
        Token t;
        t.line = line_;
        t.col = col_;
        if (pos_ >= text_.size()) {
            t.kind = Tok::End;
            return t;
        }
        char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                advance();
            }
            t.kind = Tok::Int;
            t.text = std::string(text_.substr(start, pos_ - start));
            try {
                t.intValue = std::stoll(t.text);
            } catch (const std::exception &) {
                throw ParseError("integer literal out of range", t.line, t.col);
            }
            return t;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                advance();
            }
            t.text = std::string(text_.substr(start, pos_ - start));
            t.kind = std::isupper(static_cast<unsigned char>(c)) ? Tok::Var : Tok::Ident;
            return t;
        }
        static const std::string punct = "(){}[],.:=+-/";
        if (punct.find(c) != std::string::npos) {
            t.kind = Tok::Punct;
            t.punct = c;
            advance();
            return t;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
    }

  private:
    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }
    void skipWhitespaceAndComments() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') {
                    advance();
                }
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

class Parser {
  public:
    explicit Parser(std::string_view text) : lexer_(text) { bump(); }

    Program run() {
        while (cur_.kind != Tok::End) {
            if (cur_.kind != Tok::Ident) {
                fail("expected a declaration keyword");
            }
            const std::string &kw = cur_.text;
            if (kw == "sort") {
                parseSort();
            } else if (kw == "param") {
                parseParam();
            } else if (kw == "pred") {
                parsePred();
            } else if (kw == "horizon") {
                parseHorizon();
            } else if (kw == "init") {
                parseInit();
            } else if (kw == "rule") {
                parseRule();
            } else if (kw == "observable") {
                parseObservable();
            } else if (kw == "theorem") {
                parseTheorem();
            } else {
                fail("unknown declaration '" + kw + "'");
            }
        }
        return std::move(prog_);
    }

  private:
    [[noreturn]] void fail(const std::string &msg) const { throw ParseError(msg, cur_.line, cur_.col); }
    [[noreturn]] void failAt(const std::string &msg, const Token &t) const {
        throw ParseError(msg, t.line, t.col);
    }

    void bump() { cur_ = lexer_.next(); }

    bool isPunct(char c) const { return cur_.kind == Tok::Punct && cur_.punct == c; }
    bool isKeyword(const char *kw) const { return cur_.kind == Tok::Ident && cur_.text == kw; }

    void expectPunct(char c) {
        if (!isPunct(c)) {
            fail(std::string("expected '") + c + "'");
        }
        bump();
    }
    void expectKeyword(const char *kw) {
        if (!isKeyword(kw)) {
            fail(std::string("expected '") + kw + "'");
        }
        bump();
    }
    std::string expectName(const char *what) {
        if (cur_.kind != Tok::Ident) {
            fail(std::string("expected ") + what);
        }
        if (kKeywords.count(cur_.text) != 0) {
            fail("'" + cur_.text + "' is a reserved word");
        }
        std::string s = cur_.text;
        bump();
        return s;
    }
    std::int64_t expectInt(const char *what) {
        if (cur_.kind != Tok::Int) {
            fail(std::string("expected ") + what);
        }
        std::int64_t v = cur_.intValue;
        bump();
        return v;
    }

    Rational parseNumber() {
        bool neg = false;
        if (isPunct('-')) {
            neg = true;
            bump();
        }
        std::int64_t n = expectInt("a number");
        std::int64_t d = 1;
        if (isPunct('/')) {
            bump();
            d = expectInt("a denominator");
            if (d == 0) {
                fail("zero denominator");
            }
        }
        return Rational(neg ? -n : n, d);
    }

    void checkFresh(const std::string &name, const Token &at) {
        if (prog_.findSort(name) || prog_.findPred(name)) {
            failAt("'" + name + "' is already declared", at);
        }
        for (const auto &p : prog_.params) {
            if (p.name == name) {
                failAt("'" + name + "' is already declared", at);
            }
        }
    }

    void ensureClockPred() {
        if (clockDeclared_) {
            return;
        }
        PredDecl clock;
        clock.name = kClockPred;
        clock.timeIndexed = true;
        clock.implicit = true;
        prog_.preds.push_back(std::move(clock));
        clockDeclared_ = true;
    }

    void parseSort() {
        bump();
        Token at = cur_;
        std::string name = expectName("a sort name");
        checkFresh(name, at);
        SortDecl decl;
        decl.name = name;
        expectPunct('{');
        std::unordered_set<std::string> seen;
        while (!isPunct('}')) {
            Token it = cur_;
            std::string inst = expectName("a sort instance");
            if (!seen.insert(inst).second) {
                failAt("duplicate instance '" + inst + "'", it);
            }
            decl.instances.push_back(inst);
            decl.instanceIds.push_back(prog_.symbols.intern(inst));
            if (isPunct(',')) {
                bump();
            }
        }
        bump();
        if (decl.instances.empty()) {
            failAt("sort '" + name + "' has no instances", at);
        }
        std::uint32_t sortIdx = static_cast<std::uint32_t>(prog_.sorts.size());
        prog_.sorts.push_back(decl);

        // Implicit membership predicate and facts: sortname(instance).
        PredDecl member;
        member.name = name;
        member.argSorts.push_back(ArgSort{ArgSort::Kind::Sort, sortIdx});
        member.implicit = true;
        PredId predId = static_cast<PredId>(prog_.preds.size());
        prog_.preds.push_back(std::move(member));
        for (SymbolId inst : prog_.sorts.back().instanceIds) {
            InitFact f;
            f.pred = predId;
            f.args.push_back(GroundTerm::symbol(inst));
            f.implicit = true;
            prog_.inits.push_back(std::move(f));
        }
    }

    void parseParam() {
        bump();
        Token at = cur_;
        std::string name = expectName("a parameter name");
        checkFresh(name, at);
        for (const auto &s : prog_.sorts) {
            if (std::find(s.instances.begin(), s.instances.end(), name) != s.instances.end()) {
                failAt("'" + name + "' is already a sort instance", at);
            }
        }
        expectPunct('=');
        ParamDecl p;
        p.name = name;
        p.value = parseNumber();
        prog_.params.push_back(std::move(p));
    }

    ArgSort parseArgSort() {
        if (isKeyword("number")) {
            bump();
            return ArgSort{ArgSort::Kind::Number, 0};
        }
        Token at = cur_;
        if (cur_.kind != Tok::Ident) {
            fail("expected an argument sort");
        }
        std::string name = cur_.text;
        bump();
        auto idx = prog_.findSort(name);
        if (!idx) {
            failAt("unknown sort '" + name + "'", at);
        }
        return ArgSort{ArgSort::Kind::Sort, *idx};
    }

    void parsePred() {
        bump();
        Token at = cur_;
        std::string name = expectName("a predicate name");
        if (name == kClockPred) {
            failAt(std::string("'") + kClockPred + "' is reserved for the engine clock", at);
        }
        checkFresh(name, at);
        PredDecl decl;
        decl.name = name;
        expectPunct('(');
        bool sawTime = false;
        while (!isPunct(')')) {
            if (isKeyword("time")) {
                bump();
                sawTime = true;
                if (!isPunct(')')) {
                    fail("'time' must be the final argument");
                }
                break;
            }
            decl.argSorts.push_back(parseArgSort());
            if (isPunct(',')) {
                bump();
            }
        }
        expectPunct(')');
        decl.timeIndexed = sawTime;
        prog_.preds.push_back(std::move(decl));
        if (sawTime) {
            ensureClockPred();
        }
    }

    void parseHorizon() {
        bump();
        std::int64_t h = expectInt("the horizon");
        if (h < 1) {
            fail("horizon must be positive");
        }
        prog_.horizon = static_cast<int>(h);
    }

    GroundTerm parseGroundTerm() {
        if (cur_.kind == Tok::Int || isPunct('-')) {
            return GroundTerm::number(parseNumber());
        }
        Token at = cur_;
        std::string name = expectName("a constant");
        for (const auto &p : prog_.params) {
            if (p.name == name) {
                return GroundTerm::number(p.value);
            }
        }
        return GroundTerm::symbol(internSymbol(name, at));
    }

    SymbolId internSymbol(const std::string &name, const Token &at) {
        for (const auto &s : prog_.sorts) {
            if (std::find(s.instances.begin(), s.instances.end(), name) != s.instances.end()) {
                return *prog_.symbols.lookup(name);
            }
        }
        failAt("unknown constant '" + name + "' (not a sort instance or parameter)", at);
    }

    void parseInit() {
        bump();
        Token at = cur_;
        std::string name = expectName("a predicate name");
        auto pid = prog_.findPred(name);
        if (!pid) {
            failAt("unknown predicate '" + name + "'", at);
        }
        const PredDecl &decl = prog_.preds[*pid];
        InitFact f;
        f.pred = *pid;
        f.pos = SourcePos{at.line, at.col};
        expectPunct('(');
        std::vector<GroundTerm> args;
        while (!isPunct(')')) {
            args.push_back(parseGroundTerm());
            if (isPunct(',')) {
                bump();
            }
        }
        expectPunct(')');
        std::size_t expected = decl.argSorts.size() + (decl.timeIndexed ? 1 : 0);
        if (args.size() != expected) {
            failAt("arity mismatch for '" + name + "': expected " + std::to_string(expected) +
                       " arguments, got " + std::to_string(args.size()),
                   at);
        }
        if (decl.timeIndexed) {
            const GroundTerm &t = args.back();
            if (t.kind != GroundTerm::Kind::Num || !t.num.isInteger() || t.num.num() < 1) {
                failAt("time argument of '" + name + "' must be a positive integer", at);
            }
            f.sti = static_cast<int>(t.num.num());
            args.pop_back();
        }
        f.args = std::move(args);
        prog_.inits.push_back(std::move(f));
    }

    // ---- rules ----------------------------------------------------------

    struct RuleCtx {
        Rule rule;
        std::map<std::string, VarId> vars; // names visible to later literals
        // Aggregate-local names live in a scratch map layered on top.
    };

    VarId freshVar(RuleCtx &ctx, const std::string &name) {
        VarId v = static_cast<VarId>(ctx.rule.varNames.size());
        ctx.rule.varNames.push_back(name);
        return v;
    }

    VarId ruleVar(RuleCtx &ctx, const std::string &name) {
        auto it = ctx.vars.find(name);
        if (it != ctx.vars.end()) {
            return it->second;
        }
        VarId v = freshVar(ctx, name);
        ctx.vars.emplace(name, v);
        return v;
    }

    Term parseTerm(RuleCtx &ctx, std::map<std::string, VarId> *locals) {
        if (cur_.kind == Tok::Var) {
            std::string name = cur_.text;
            bump();
            if (locals != nullptr) {
                auto it = ctx.vars.find(name);
                if (it != ctx.vars.end()) {
                    return Term::mkVar(it->second);
                }
                auto lt = locals->find(name);
                if (lt != locals->end()) {
                    return Term::mkVar(lt->second);
                }
                VarId v = freshVar(ctx, name);
                locals->emplace(name, v);
                return Term::mkVar(v);
            }
            return Term::mkVar(ruleVar(ctx, name));
        }
        return Term::mkConst(parseGroundTerm());
    }

    /// Parses `pred(arg, ..., timeterm)` with the time argument split off.
    /// In heads, `T + 1` offsets are accepted when allowOffset is set.
    Atom parseAtom(RuleCtx &ctx, bool allowOffset, std::map<std::string, VarId> *locals) {
        Token at = cur_;
        std::string name = expectName("a predicate name");
        auto pid = prog_.findPred(name);
        if (!pid) {
            failAt("unknown predicate '" + name + "'", at);
        }
        const PredDecl &decl = prog_.preds[*pid];
        Atom atom;
        atom.pred = *pid;
        atom.pos = SourcePos{at.line, at.col};
        expectPunct('(');
        std::vector<Term> raw;
        std::vector<Token> rawAt;
        int offsetAt = -1;
        while (!isPunct(')')) {
            rawAt.push_back(cur_);
            raw.push_back(parseTerm(ctx, locals));
            if (isPunct('+')) {
                Token plusAt = cur_;
                bump();
                std::int64_t k = expectInt("an offset");
                if (k != 1) {
                    failAt("only '+ 1' time offsets exist", plusAt);
                }
                offsetAt = static_cast<int>(raw.size()) - 1;
            }
            if (isPunct(',')) {
                bump();
            }
        }
        expectPunct(')');
        std::size_t expected = decl.argSorts.size() + (decl.timeIndexed ? 1 : 0);
        if (raw.size() != expected) {
            failAt("arity mismatch for '" + name + "': expected " + std::to_string(expected) +
                       " arguments, got " + std::to_string(raw.size()),
                   at);
        }
        bool offsetOnLast = offsetAt >= 0 && offsetAt == static_cast<int>(raw.size()) - 1;
        if (offsetAt >= 0 && (!offsetOnLast || !decl.timeIndexed || !allowOffset)) {
            failAt("'+ 1' is only valid on the time argument of a consequent", at);
        }
        if (decl.timeIndexed) {
            Term timeTerm = raw.back();
            Token timeAt = rawAt.back();
            raw.pop_back();
            if (timeTerm.kind == Term::Kind::Var) {
                bool aggLocal = locals != nullptr;
                if (aggLocal) {
                    for (const auto &[n, v] : ctx.vars) {
                        (void)n;
                        if (v == timeTerm.var) {
                            aggLocal = false;
                            break;
                        }
                    }
                }
                if (aggLocal) {
                    failAt("the time variable must be bound outside the aggregate", timeAt);
                }
                if (ctx.rule.timeVar && *ctx.rule.timeVar != timeTerm.var) {
                    failAt("a rule may use only one time variable", timeAt);
                }
                if (!ctx.rule.timeVar) {
                    ctx.rule.timeVar = timeTerm.var;
                }
                atom.time.kind = offsetOnLast ? TimeRef::Kind::VarPlusOne : TimeRef::Kind::Var;
            } else {
                const GroundTerm &g = timeTerm.constant;
                if (g.kind != GroundTerm::Kind::Num || !g.num.isInteger() || g.num.num() < 1) {
                    failAt("time argument must be a positive integer or a variable", timeAt);
                }
                std::int64_t v = g.num.num() + (offsetOnLast ? 1 : 0);
                atom.time.kind = TimeRef::Kind::Const;
                atom.time.value = static_cast<int>(v);
            }
        }
        atom.args = std::move(raw);
        return atom;
    }

    Literal parseLiteral(RuleCtx &ctx) {
        Literal lit;
        lit.pos = SourcePos{cur_.line, cur_.col};
        if (isKeyword("not")) {
            bump();
            lit.kind = Literal::Kind::Negated;
            lit.atom = parseAtom(ctx, false, nullptr);
            return lit;
        }
        if (isKeyword("choose")) {
            bump();
            lit.kind = Literal::Kind::Choice;
            if (cur_.kind != Tok::Var) {
                fail("expected a choice variable");
            }
            std::string varName = cur_.text;
            bump();
            lit.choiceVar = ruleVar(ctx, varName);
            if (isKeyword("in")) {
                bump();
                lit.choiceSrc = Literal::ChoiceSrc::FromSort;
                Token at = cur_;
                std::string sortName = expectName("a sort name");
                auto idx = prog_.findSort(sortName);
                if (!idx) {
                    failAt("unknown sort '" + sortName + "'", at);
                }
                lit.choiceSort = *idx;
                if (isKeyword("except")) {
                    bump();
                    for (;;) {
                        lit.exceptTerms.push_back(parseTerm(ctx, nullptr));
                        if (isPunct(',')) {
                            bump();
                            continue;
                        }
                        break;
                    }
                }
            } else if (isKeyword("from")) {
                bump();
                lit.choiceSrc = Literal::ChoiceSrc::FromPattern;
                lit.atom = parseAtom(ctx, false, nullptr);
            } else {
                fail("expected 'in' or 'from' after the choice variable");
            }
            return lit;
        }
        if (isKeyword("let")) {
            bump();
            lit.kind = Literal::Kind::Builtin;
            if (cur_.kind != Tok::Var) {
                fail("expected an output variable");
            }
            std::string outName = cur_.text;
            bump();
            expectPunct('=');
            Token at = cur_;
            lit.fnName = expectName("a builtin name");
            if (findBuiltin(lit.fnName) == nullptr) {
                failAt("unknown builtin '" + lit.fnName + "'", at);
            }
            expectPunct('(');
            while (!isPunct(')')) {
                lit.inputs.push_back(parseTerm(ctx, nullptr));
                if (isPunct(',')) {
                    bump();
                }
            }
            expectPunct(')');
            if (lit.inputs.size() != static_cast<std::size_t>(findBuiltin(lit.fnName)->arity)) {
                failAt("arity mismatch for builtin '" + lit.fnName + "': expected " +
                           std::to_string(findBuiltin(lit.fnName)->arity) + " arguments",
                       at);
            }
            lit.outVar = ruleVar(ctx, outName);
            return lit;
        }
        if (isKeyword("agg")) {
            bump();
            lit.kind = Literal::Kind::Aggregate;
            if (cur_.kind != Tok::Var) {
                fail("expected an output variable");
            }
            std::string outName = cur_.text;
            bump();
            expectPunct('=');
            if (isKeyword("sum")) {
                lit.aggOp = AggOp::Sum;
            } else if (isKeyword("min")) {
                lit.aggOp = AggOp::Min;
            } else if (isKeyword("max")) {
                lit.aggOp = AggOp::Max;
            } else if (isKeyword("count")) {
                lit.aggOp = AggOp::Count;
            } else {
                fail("expected an aggregate operator (sum, min, max, count)");
            }
            bump();
            if (cur_.kind != Tok::Var) {
                fail("expected the aggregated variable");
            }
            std::string valueName = cur_.text;
            Token valueAt = cur_;
            bump();
            expectKeyword("in");
            std::map<std::string, VarId> locals;
            {
                auto it = ctx.vars.find(valueName);
                if (it != ctx.vars.end()) {
                    failAt("aggregated variable '" + valueName + "' is already bound", valueAt);
                }
                VarId v = freshVar(ctx, valueName);
                locals.emplace(valueName, v);
                lit.aggValue = v;
            }
            if (isPunct('(')) {
                bump();
                while (!isPunct(')')) {
                    lit.aggPatterns.push_back(parseAtom(ctx, false, &locals));
                    if (isPunct(',')) {
                        bump();
                    }
                }
                expectPunct(')');
            } else {
                lit.aggPatterns.push_back(parseAtom(ctx, false, &locals));
            }
            if (lit.aggPatterns.empty()) {
                failAt("aggregate needs at least one pattern", valueAt);
            }
            lit.aggOut = ruleVar(ctx, outName);
            return lit;
        }
        lit.kind = Literal::Kind::Positive;
        lit.atom = parseAtom(ctx, false, nullptr);
        return lit;
    }

    void parseRule() {
        bump();
        Token at = cur_;
        RuleCtx ctx;
        ctx.rule.id = expectName("a rule id");
        ctx.rule.pos = SourcePos{at.line, at.col};
        if (prog_.findRule(ctx.rule.id)) {
            failAt("duplicate rule id '" + ctx.rule.id + "'", at);
        }
        expectPunct(':');
        for (;;) {
            ctx.rule.body.push_back(parseLiteral(ctx));
            if (isKeyword("and")) {
                bump();
                continue;
            }
            break;
        }
        expectKeyword("implies");
        if (isKeyword("false")) {
            bump();
            ctx.rule.headIsFalse = true;
        } else {
            for (;;) {
                ctx.rule.head.push_back(parseAtom(ctx, true, nullptr));
                if (isKeyword("and")) {
                    bump();
                    continue;
                }
                break;
            }
        }
        if (isKeyword("split")) {
            bump();
            expectKeyword("by");
            for (;;) {
                if (isKeyword("time")) {
                    bump();
                    ctx.rule.splitDims.push_back("time");
                } else {
                    ctx.rule.splitDims.push_back(expectName("a split dimension"));
                }
                if (isPunct(',')) {
                    bump();
                    continue;
                }
                break;
            }
        }
        expectPunct('.');
        prog_.rules.push_back(std::move(ctx.rule));
    }

    ObservableTermExpr parseObservableSide() {
        ObservableTermExpr side;
        if (isKeyword("sum")) {
            side.op = AggOp::Sum;
        } else if (isKeyword("min")) {
            side.op = AggOp::Min;
        } else if (isKeyword("max")) {
            side.op = AggOp::Max;
        } else if (isKeyword("count")) {
            side.op = AggOp::Count;
        } else {
            fail("expected an aggregate operator");
        }
        bump();
        expectPunct('(');
        Token at = cur_;
        std::string predName = expectName("a predicate name");
        auto pid = prog_.findPred(predName);
        if (!pid) {
            failAt("unknown predicate '" + predName + "'", at);
        }
        side.pred = *pid;
        expectPunct('[');
        std::int64_t pos = expectInt("an argument position");
        if (pos < 1 || static_cast<std::size_t>(pos) > prog_.preds[*pid].argSorts.size()) {
            failAt("argument position out of range for '" + predName + "'", at);
        }
        side.argPos = static_cast<int>(pos);
        expectPunct(']');
        expectPunct(')');
        return side;
    }

    void parseObservable() {
        bump();
        Token at = cur_;
        ObservableDecl decl;
        decl.name = expectName("an observable name");
        for (const auto &o : prog_.observables) {
            if (o.name == decl.name) {
                failAt("duplicate observable '" + decl.name + "'", at);
            }
        }
        expectPunct('=');
        decl.first = parseObservableSide();
        if (isPunct('-')) {
            bump();
            decl.minus = parseObservableSide();
        }
        prog_.observables.push_back(std::move(decl));
    }

    void parseTheorem() {
        bump();
        Token at = cur_;
        TheoremDecl decl;
        decl.name = expectName("a theorem name");
        for (const auto &t : prog_.theorems) {
            if (t.name == decl.name) {
                failAt("duplicate theorem '" + decl.name + "'", at);
            }
        }
        expectPunct('=');
        Token ot = cur_;
        decl.observable = expectName("an observable name");
        if (prog_.findObservable(decl.observable) == nullptr) {
            failAt("unknown observable '" + decl.observable + "'", ot);
        }
        if (isKeyword("strictly_decreasing")) {
            decl.chain = ChainKind::StrictlyDecreasing;
        } else if (isKeyword("strictly_increasing")) {
            decl.chain = ChainKind::StrictlyIncreasing;
        } else if (isKeyword("non_increasing")) {
            decl.chain = ChainKind::NonIncreasing;
        } else if (isKeyword("non_decreasing")) {
            decl.chain = ChainKind::NonDecreasing;
        } else {
            fail("expected a comparison chain kind");
        }
        bump();
        expectKeyword("from");
        decl.from = static_cast<int>(expectInt("the first STI"));
        expectKeyword("to");
        decl.to = static_cast<int>(expectInt("the last STI"));
        prog_.theorems.push_back(std::move(decl));
    }

    Lexer lexer_;
    Token cur_;
    Program prog_;
    bool clockDeclared_ = false;
};

} // namespace

Program parseProgram(std::string_view text) {
    Parser p(text);
    return p.run();
}

} // namespace trajex
