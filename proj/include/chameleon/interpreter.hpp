#pragma once

// Statement-level interpreter for application sources. It executes the program
// against a concrete API output and reports which branch ran, without
// extracting a summary first. Tests use it as the oracle for decide(parse(.)).
//
// The decision is read off the executed leaf:
//   returned bool              -> Bool
//   returned collection        -> Selected (classes guarding each append into it)
//   any other return / no return:
//     under a true class-list test   -> Chosen(that list's variable name)
//     under a true scalar comparison -> Chosen(returned string)
//     otherwise                      -> Chosen(NONE)

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "chameleon/core.hpp"
#include "chameleon/source.hpp"

namespace chameleon {

namespace interp_detail {

using source::Expr;
using source::Position;
using source::SourceError;
using source::Stmt;

struct Value;
using List = std::vector<Value>;
using Object = std::map<std::string, Value>;

struct Value {
  enum class Kind : std::uint8_t { None, Bool, Num, Str, List, Object, Opaque };
  Kind kind = Kind::None;
  bool b = false;
  double num = 0;
  std::string str;
  std::shared_ptr<List> list;
  std::shared_ptr<Object> obj;
  std::string origin;  // variable a string list was bound to at top level

  static Value none() { return {}; }
  static Value boolean(bool v) {
    Value x;
    x.kind = Kind::Bool;
    x.b = v;
    return x;
  }
  static Value number(double v) {
    Value x;
    x.kind = Kind::Num;
    x.num = v;
    return x;
  }
  static Value string(std::string v) {
    Value x;
    x.kind = Kind::Str;
    x.str = std::move(v);
    return x;
  }
  static Value make_list(List items = {}) {
    Value x;
    x.kind = Kind::List;
    x.list = std::make_shared<List>(std::move(items));
    return x;
  }
  static Value object(Object fields) {
    Value x;
    x.kind = Kind::Object;
    x.obj = std::make_shared<Object>(std::move(fields));
    return x;
  }
  static Value opaque() {
    Value x;
    x.kind = Kind::Opaque;
    return x;
  }
};

// A condition result plus the guard it establishes when true.
struct Truth {
  bool value = false;
  std::optional<std::string> class_guard;
  bool scalar_guard = false;
};

struct Guard {
  std::optional<std::string> cls;
  bool scalar = false;
};

struct Returned {};

class Interpreter {
 public:
  Interpreter(const ApiOutput& output, double theta) : output_(output), theta_(theta) {}

  DecisionOutcome run(const source::Program& prog) {
    try {
      exec_block(prog, /*top_level=*/true);
    } catch (const Returned&) {
      return outcome();
    }
    return DecisionOutcome::none();
  }

 private:
  [[noreturn]] static void unsupported(const std::string& msg, Position pos) {
    throw SourceError(ErrorCode::Unsupported, msg, pos);
  }

  DecisionOutcome outcome() const {
    const Value& v = returned_;
    if (v.kind == Value::Kind::Bool) return DecisionOutcome::boolean(v.b);
    if (v.kind == Value::Kind::List) {
      std::set<std::string> names;
      for (const auto& [list, name] : appends_)
        if (list == v.list.get()) names.insert(name);
      return DecisionOutcome::selection(std::move(names));
    }
    if (return_guard_.cls) return DecisionOutcome::choice(*return_guard_.cls);
    if (return_guard_.scalar && v.kind == Value::Kind::Str) return DecisionOutcome::choice(v.str);
    return DecisionOutcome::none();
  }

  Guard innermost_guard() const {
    for (auto it = guards_.rbegin(); it != guards_.rend(); ++it)
      if (it->cls || it->scalar) return *it;
    return {};
  }

  void exec_block(const std::vector<Stmt>& body, bool top_level = false) {
    for (const auto& s : body) exec(s, top_level);
  }

  void exec(const Stmt& s, bool top_level) {
    switch (s.kind) {
      case Stmt::Kind::Import:
      case Stmt::Kind::Pass:
        return;
      case Stmt::Kind::Assign: {
        Value v = eval(*s.value);
        if (top_level && v.kind == Value::Kind::List && s.value->kind == Expr::Kind::List) v.origin = s.target;
        env_[s.target] = std::move(v);
        return;
      }
      case Stmt::Kind::ExprStmt:
        eval(*s.value);
        return;
      case Stmt::Kind::Return:
        returned_ = s.value ? eval(*s.value) : Value::none();
        return_guard_ = innermost_guard();
        throw Returned{};
      case Stmt::Kind::For: {
        const Value seq = eval(*s.value);
        if (seq.kind != Value::Kind::List) unsupported("unsupported construct: loop over a non-list", s.value->pos);
        const List items = *seq.list;  // snapshot; the body may append elsewhere
        for (const auto& item : items) {
          env_[s.target] = item;
          exec_block(s.body);
        }
        return;
      }
      case Stmt::Kind::If: {
        for (const auto& b : s.branches) {
          const Truth t = test(b.cond);
          if (t.value) {
            guards_.push_back({t.class_guard, t.scalar_guard});
            exec_block(b.body);
            guards_.pop_back();
            return;
          }
        }
        if (s.has_else) {
          guards_.push_back({});
          exec_block(s.body);
          guards_.pop_back();
        }
        return;
      }
    }
  }

  Truth test(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::Not: {
        Truth inner = test(e.children[0]);
        return {!inner.value, std::nullopt, false};
      }
      case Expr::Kind::And: {
        Truth acc{true, std::nullopt, false};
        for (const auto& c : e.children) {
          Truth t = test(c);
          if (!t.value) return {false, std::nullopt, false};
          if (t.class_guard) acc.class_guard = t.class_guard;
          acc.scalar_guard = acc.scalar_guard || t.scalar_guard;
        }
        return acc;
      }
      case Expr::Kind::Or: {
        for (const auto& c : e.children) {
          Truth t = test(c);
          if (t.value) return t;
        }
        return {false, std::nullopt, false};
      }
      case Expr::Kind::Compare:
        return compare(e);
      case Expr::Kind::Call:
        if (e.children.front().is_name("intersects")) return intersects(e);
        [[fallthrough]];
      default: {
        const Value v = eval(e);
        return {truthy(v, e.pos), std::nullopt, false};
      }
    }
  }

  bool truthy(const Value& v, Position pos) const {
    switch (v.kind) {
      case Value::Kind::None: return false;
      case Value::Kind::Bool: return v.b;
      case Value::Kind::Num: return v.num != 0;
      case Value::Kind::Str: return !v.str.empty();
      case Value::Kind::List: return !v.list->empty();
      default: unsupported("unsupported construct: truth value of an opaque object", pos);
    }
  }

  static bool contains(const List& list, const std::string& s) {
    for (const auto& v : list)
      if (v.kind == Value::Kind::Str && v.str == s) return true;
    return false;
  }

  Truth intersects(const Expr& call) {
    if (call.children.size() != 3) unsupported("unsupported construct: intersects() takes two arguments", call.pos);
    const Value a = eval(call.children[1]);
    const Value b = eval(call.children[2]);
    if (a.kind != Value::Kind::List || b.kind != Value::Kind::List)
      unsupported("unsupported construct: intersects() over non-lists", call.pos);
    bool hit = false;
    for (const auto& x : *a.list)
      if (x.kind == Value::Kind::Str && contains(*b.list, x.str)) hit = true;
    std::optional<std::string> guard;
    if (hit) guard = !b.origin.empty() ? b.origin : (!a.origin.empty() ? a.origin : std::string());
    if (guard && guard->empty()) guard.reset();
    return {hit, guard, false};
  }

  Truth compare(const Expr& e) {
    std::vector<Value> vals;
    vals.reserve(e.children.size());
    for (const auto& c : e.children) vals.push_back(eval(c));
    Truth t{true, std::nullopt, false};
    for (std::size_t i = 0; i < e.ops.size(); ++i) {
      const std::string& op = e.ops[i];
      const Value& l = vals[i];
      const Value& r = vals[i + 1];
      bool ok = false;
      if (op == "in" || op == "not in") {
        if (r.kind != Value::Kind::List || l.kind != Value::Kind::Str)
          unsupported("unsupported construct: membership needs a string and a list", e.children[i].pos);
        ok = contains(*r.list, l.str) == (op == "in");
        if (ok && op == "in" && !r.origin.empty()) t.class_guard = r.origin;
      } else if (op == "==" || op == "!=") {
        bool eq = false;
        if (l.kind == Value::Kind::Num && r.kind == Value::Kind::Num) eq = l.num == r.num;
        else if (l.kind == Value::Kind::Str && r.kind == Value::Kind::Str) eq = l.str == r.str;
        else if (l.kind == Value::Kind::Bool && r.kind == Value::Kind::Bool) eq = l.b == r.b;
        else if (l.kind == Value::Kind::None || r.kind == Value::Kind::None) eq = l.kind == r.kind;
        else unsupported("unsupported construct: equality between mixed types", e.children[i].pos);
        ok = eq == (op == "==");
      } else {
        if (l.kind != Value::Kind::Num || r.kind != Value::Kind::Num)
          unsupported("unsupported construct: ordering comparison on non-numbers", e.children[i].pos);
        if (op == "<") ok = l.num < r.num;
        else if (op == "<=") ok = l.num <= r.num;
        else if (op == ">") ok = l.num > r.num;
        else ok = l.num >= r.num;
        t.scalar_guard = true;
      }
      if (!ok) return {false, std::nullopt, false};
    }
    return t;
  }

  Value api_response(const Expr& call) const {
    const std::string& method = call.children.front().text;
    if (method == "label_detection") {
      CHAMELEON_REQUIRE(!output_.is_scalar(), ErrorCode::KindMismatch, "label API called with a scalar output");
      List annotations;
      for (const auto& item : output_.items()) {
        if (item.score < theta_) continue;
        annotations.push_back(Value::object({{"name", Value::string(item.name)},
                                             {"score", Value::number(item.score)}}));
      }
      return Value::object({{"label_annotations", Value::make_list(std::move(annotations))}});
    }
    CHAMELEON_REQUIRE(output_.is_scalar(), ErrorCode::KindMismatch, "scalar API called with a label output");
    Value sentiment = Value::object({{"score", Value::number(output_.scalar())},
                                     {"magnitude", Value::number(std::abs(output_.scalar()))}});
    return Value::object({{"document_sentiment", sentiment}});
  }

  Value eval(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::Str: return Value::string(e.text);
      case Expr::Kind::Num: return Value::number(e.number);
      case Expr::Kind::Bool: return Value::boolean(e.boolean);
      case Expr::Kind::None: return Value::none();
      case Expr::Kind::Name: {
        auto it = env_.find(e.text);
        if (it == env_.end()) return Value::opaque();  // free names (image bytes, clients) are opaque
        return it->second;
      }
      case Expr::Kind::Attr: {
        const Value base = eval(e.children[0]);
        if (base.kind == Value::Kind::Opaque) return Value::opaque();
        if (base.kind != Value::Kind::Object) unsupported("unsupported construct: attribute of a plain value", e.pos);
        auto it = base.obj->find(e.text);
        if (it == base.obj->end()) return Value::opaque();
        return it->second;
      }
      case Expr::Kind::Call: {
        const Expr& callee = e.children.front();
        if (callee.kind == Expr::Kind::Attr && (callee.text == "label_detection" || callee.text == "analyze_sentiment"))
          return api_response(e);
        if (callee.kind == Expr::Kind::Attr && callee.text == "append") {
          const Value target = eval(callee.children[0]);
          if (target.kind != Value::Kind::List || e.children.size() != 2)
            unsupported("unsupported construct: append on a non-list", e.pos);
          Value item = eval(e.children[1]);
          const Guard g = innermost_guard();
          if (g.cls) appends_.emplace_back(target.list.get(), *g.cls);
          else if (item.kind == Value::Kind::Str) appends_.emplace_back(target.list.get(), item.str);
          target.list->push_back(std::move(item));
          return Value::none();
        }
        if (callee.is_name("intersects")) {
          const Truth t = intersects(e);
          return Value::boolean(t.value);
        }
        return Value::opaque();
      }
      case Expr::Kind::Keyword: return eval(e.children[0]);
      case Expr::Kind::List: {
        List items;
        for (const auto& c : e.children) items.push_back(eval(c));
        return Value::make_list(std::move(items));
      }
      case Expr::Kind::ListComp: {
        const Value seq = eval(e.children[1]);
        if (seq.kind != Value::Kind::List) unsupported("unsupported construct: comprehension over a non-list", e.pos);
        List items;
        const auto saved = env_.find(e.text) != env_.end() ? std::optional<Value>(env_[e.text]) : std::nullopt;
        for (const auto& item : *seq.list) {
          env_[e.text] = item;
          items.push_back(eval(e.children[0]));
        }
        if (saved) env_[e.text] = *saved;
        else env_.erase(e.text);
        return Value::make_list(std::move(items));
      }
      case Expr::Kind::Compare:
      case Expr::Kind::And:
      case Expr::Kind::Or:
      case Expr::Kind::Not:
        return Value::boolean(test(e).value);
      case Expr::Kind::Neg: {
        const Value v = eval(e.children[0]);
        if (v.kind != Value::Kind::Num) unsupported("unsupported construct: negation of a non-number", e.pos);
        return Value::number(-v.num);
      }
    }
    unsupported("unsupported construct", e.pos);
  }

  const ApiOutput& output_;
  double theta_;
  std::map<std::string, Value> env_;
  std::vector<Guard> guards_;
  std::vector<std::pair<const List*, std::string>> appends_;
  Value returned_;
  Guard return_guard_;
};

}  // namespace interp_detail

/// Runs the application source against `output` as served through a backend
/// that drops labels scored below `theta`.
inline DecisionOutcome reference_interpret(const ApiOutput& output, std::string_view app_source,
                                           double theta = kDefaultTheta) {
  const source::Program prog = source::parse_program(app_source);
  interp_detail::Interpreter interp(output, theta);
  return interp.run(prog);
}

}  // namespace chameleon
