#pragma once

// Static extraction of a DecisionSummary from application source, and the
// canonical renderer used to generate sources from summaries.
//
// Accepted program shape:
//   prelude   imports, `Name = ['a', 'b']` class lists, opaque call
//             assignments, exactly one API call
//             (`r = client.label_detection(...)` or `r = client.analyze_sentiment(...)`),
//             `labels = [o.name for o in r.label_annotations]`,
//             `score = r.<attr>...` (scalar APIs) and `selected = []`.
//   decision  one of:
//     loop      `for o in r.label_annotations:` (or `for l in labels:`) whose
//               body is a run of `if o.name in C: <leaf>`
//                 leaves return            -> MULTI_CHOICE / API_OUTPUT
//                 leaves return True, one class, then `return False`
//                                          -> TRUE_FALSE
//                 leaves append, then `return selected` -> MULTI_SELECT
//     chain     `if intersects(labels, C): <leaf>` as an if/elif chain or a
//               run of separate ifs
//                 leaves return            -> MULTI_CHOICE / APP_CHOICE
//                 one class, True/False two-way branch  -> TRUE_FALSE
//                 separate ifs appending, then `return selected` -> MULTI_SELECT
//     scalar    `if lo <= score < hi: return 'name'` chain
//                                          -> value-range MULTI_CHOICE / APP_CHOICE
//               single range with True/False two-way branch -> value-range TRUE_FALSE
//   An optional trailing `return <literal>` acts as the no-decision fallthrough.

#include <charconv>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "chameleon/core.hpp"
#include "chameleon/source.hpp"

namespace chameleon {

struct ParseDiagnostic {
  enum class Severity : std::uint8_t { Error, Warning };
  Severity severity = Severity::Error;
  std::string message;
  int line = 0;
  int column = 0;

  json to_json() const {
    json j;
    j["severity"] = severity == Severity::Error ? "error" : "warning";
    j["message"] = message;
    j["line"] = line;
    j["column"] = column;
    return j;
  }
};

struct ExtractResult {
  std::optional<DecisionSummary> summary;
  std::vector<ParseDiagnostic> diagnostics;

  bool ok() const { return summary.has_value(); }
  const ParseDiagnostic* first_error() const {
    for (const auto& d : diagnostics)
      if (d.severity == ParseDiagnostic::Severity::Error) return &d;
    return nullptr;
  }
};

namespace extract_detail {

using source::Expr;
using source::Position;
using source::SourceError;
using source::Stmt;

[[noreturn]] inline void reject(const std::string& msg, Position pos) {
  throw SourceError(ErrorCode::Unsupported, msg, pos);
}

enum class ApiKind : std::uint8_t { Labels, Scalar };

enum class LeafKind : std::uint8_t { Return, Append };

struct Leaf {
  LeafKind kind = LeafKind::Return;
  std::optional<Expr> value;  // returned or appended value
  std::string collection;     // append target
  Position pos;

  bool returns_bool(bool b) const {
    return kind == LeafKind::Return && value && value->kind == Expr::Kind::Bool && value->boolean == b;
  }
  bool returns_any_bool() const {
    return kind == LeafKind::Return && value && value->kind == Expr::Kind::Bool;
  }
};

class Extractor {
 public:
  Extractor(const source::Program& prog, std::string app_id, double theta)
      : prog_(prog), app_id_(std::move(app_id)), theta_(theta) {}

  DecisionSummary run(std::vector<ParseDiagnostic>& warnings) {
    std::size_t i = 0;
    for (; i < prog_.size(); ++i) {
      const Stmt& s = prog_[i];
      if (s.kind == Stmt::Kind::Import || s.kind == Stmt::Kind::Pass) continue;
      if (s.kind != Stmt::Kind::Assign) break;
      prelude_assign(s);
    }
    if (!api_) {
      const Position p = i < prog_.size() ? prog_[i].pos : Position{};
      if (lists_.empty()) reject("no target classes found", p);
      reject("unsupported pattern: no API call found before the decision block", p);
    }
    if (i == prog_.size()) reject("no target classes found", prog_.empty() ? Position{} : prog_.back().pos);
    if (api_ == ApiKind::Labels && lists_.empty()) reject("no target classes found", prog_[i].pos);

    DecisionSummary summary = decision_block(i);
    for (const auto& [name, def] : lists_) {
      if (!used_.count(name))
        warnings.push_back({ParseDiagnostic::Severity::Warning,
                            "class list '" + name + "' is never tested; ignored", def.pos.line, def.pos.column});
    }
    return summary;
  }

 private:
  struct ListDef {
    LabelSet labels;
    Position pos;
  };

  // ---- prelude ------------------------------------------------------------

  void prelude_assign(const Stmt& s) {
    const Expr& v = *s.value;
    if (defined_.count(s.target)) reject("unsupported pattern: name '" + s.target + "' reassigned", s.pos);
    defined_.insert(s.target);

    if (v.kind == Expr::Kind::List) {
      if (v.children.empty()) {
        collections_.insert(s.target);
        return;
      }
      ListDef def{{}, s.pos};
      for (const auto& e : v.children) {
        if (e.kind != Expr::Kind::Str) reject("unsupported pattern: class lists must contain only string literals", e.pos);
        def.labels.push_back(e.text);
      }
      lists_.emplace(s.target, std::move(def));
      return;
    }
    if (v.kind == Expr::Kind::Call) {
      const Expr& callee = v.children.front();
      const bool label_api = callee.kind == Expr::Kind::Attr && callee.text == "label_detection";
      const bool scalar_api = callee.kind == Expr::Kind::Attr && callee.text == "analyze_sentiment";
      if (label_api || scalar_api) {
        if (api_) reject("unsupported pattern: more than one ML API call", s.pos);
        api_ = label_api ? ApiKind::Labels : ApiKind::Scalar;
        response_ = s.target;
        return;
      }
      if (callee.kind == Expr::Kind::Name && callee.text == "intersects")
        reject("unsupported pattern: intersects() outside a condition", v.pos);
      return;
    }
    if (v.kind == Expr::Kind::ListComp) {
      // [o.name for o in response.label_annotations]
      const Expr& elem = v.children[0];
      const Expr& iter = v.children[1];
      const bool elem_ok = elem.kind == Expr::Kind::Attr && elem.text == "name" &&
                           elem.children[0].is_name(v.text);
      if (!elem_ok || !is_annotations(iter))
        reject("unsupported pattern: comprehension must be [o.name for o in response.label_annotations]", v.pos);
      labels_vars_.insert(s.target);
      return;
    }
    if (v.kind == Expr::Kind::Attr) {
      const Expr* root = &v;
      while (root->kind == Expr::Kind::Attr) root = &root->children.front();
      if (api_ == ApiKind::Scalar && root->is_name(response_)) {
        scalar_vars_.insert(s.target);
        if (scalar_name_.empty()) scalar_name_ = s.target;
        return;
      }
      reject("unsupported pattern: attribute assignment not rooted at the sentiment response", v.pos);
    }
    reject("unsupported pattern: assignment outside the accepted forms", v.pos);
  }

  bool is_annotations(const Expr& e) const {
    return api_ == ApiKind::Labels && e.kind == Expr::Kind::Attr && e.text == "label_annotations" &&
           e.children[0].is_name(response_);
  }

  // ---- leaves -------------------------------------------------------------

  Leaf leaf_of(const std::vector<Stmt>& body, Position owner) const {
    if (body.size() != 1) reject("unsupported pattern: branch body must be a single return or append", owner);
    const Stmt& s = body.front();
    Leaf leaf;
    leaf.pos = s.pos;
    if (s.kind == Stmt::Kind::Return) {
      leaf.kind = LeafKind::Return;
      leaf.value = s.value;
      if (s.value && !is_literal(*s.value))
        reject("unsupported pattern: branch must return a literal", s.value->pos);
      return leaf;
    }
    if (s.kind == Stmt::Kind::ExprStmt && s.value->kind == Expr::Kind::Call) {
      const Expr& call = *s.value;
      const Expr& callee = call.children.front();
      if (callee.kind == Expr::Kind::Attr && callee.text == "append" &&
          callee.children[0].kind == Expr::Kind::Name && collections_.count(callee.children[0].text) &&
          call.children.size() == 2 && call.children[1].kind == Expr::Kind::Str) {
        leaf.kind = LeafKind::Append;
        leaf.value = call.children[1];
        leaf.collection = callee.children[0].text;
        return leaf;
      }
    }
    reject("unsupported pattern: branch body must be a single return or append", s.pos);
  }

  static bool is_literal(const Expr& e) {
    return e.kind == Expr::Kind::Str || e.kind == Expr::Kind::Num || e.kind == Expr::Kind::Bool ||
           e.kind == Expr::Kind::None;
  }

  std::string use_class(const std::string& name, Position pos) {
    if (!lists_.count(name)) reject("unsupported pattern: '" + name + "' is not a class list", pos);
    if (!used_.insert(name).second) reject("unsupported pattern: class '" + name + "' tested more than once", pos);
    return name;
  }

  // ---- conditions ---------------------------------------------------------

  // `o.name in C` (annotation loop) or `l in C` (labels loop)
  std::optional<std::string> membership_test(const Expr& cond, const std::string& var, bool annotation_loop) {
    if (cond.kind != Expr::Kind::Compare || cond.ops.size() != 1 || cond.ops[0] != "in") return std::nullopt;
    const Expr& lhs = cond.children[0];
    const Expr& rhs = cond.children[1];
    const bool lhs_ok = annotation_loop
                            ? (lhs.kind == Expr::Kind::Attr && lhs.text == "name" && lhs.children[0].is_name(var))
                            : lhs.is_name(var);
    if (!lhs_ok || rhs.kind != Expr::Kind::Name) return std::nullopt;
    return use_class(rhs.text, rhs.pos);
  }

  // `intersects(labels, C)` in either argument order
  std::optional<std::string> intersection_test(const Expr& cond) {
    if (cond.kind != Expr::Kind::Call || !cond.children.front().is_name("intersects")) return std::nullopt;
    if (cond.children.size() != 3) reject("unsupported pattern: intersects() takes two arguments", cond.pos);
    const Expr& a = cond.children[1];
    const Expr& b = cond.children[2];
    auto is_labels = [&](const Expr& e) { return e.kind == Expr::Kind::Name && labels_vars_.count(e.text) > 0; };
    auto is_list = [&](const Expr& e) { return e.kind == Expr::Kind::Name && lists_.count(e.text) > 0; };
    if (is_labels(a) && is_list(b)) return use_class(b.text, b.pos);
    if (is_list(a) && is_labels(b)) return use_class(a.text, a.pos);
    reject("unsupported pattern: intersects() needs the API label list and a class list", cond.pos);
  }

  // `lo <= s < hi` or `s >= lo and s < hi`
  std::optional<ValueRange> range_test(const Expr& cond) const {
    auto scalar = [&](const Expr& e) { return e.kind == Expr::Kind::Name && scalar_vars_.count(e.text) > 0; };
    auto num = [](const Expr& e) { return e.kind == Expr::Kind::Num; };
    if (cond.kind == Expr::Kind::Compare && cond.ops.size() == 2) {
      const auto& o = cond.ops;
      const auto& c = cond.children;
      if (scalar(c[1]) && num(c[0]) && num(c[2])) {
        if ((o[0] == "<" || o[0] == "<=") && (o[1] == "<" || o[1] == "<="))
          return ValueRange{c[0].number, c[2].number, o[0] == "<=", o[1] == "<="};
        if ((o[0] == ">" || o[0] == ">=") && (o[1] == ">" || o[1] == ">="))
          return ValueRange{c[2].number, c[0].number, o[1] == ">=", o[0] == ">="};
      }
      return std::nullopt;
    }
    if (cond.kind == Expr::Kind::And && cond.children.size() == 2) {
      std::optional<std::pair<double, bool>> lo, hi;
      for (const auto& part : cond.children) {
        if (part.kind != Expr::Kind::Compare || part.ops.size() != 1) return std::nullopt;
        std::string op = part.ops[0];
        const Expr* var = &part.children[0];
        const Expr* bound = &part.children[1];
        if (!scalar(*var)) {
          std::swap(var, bound);
          if (op == "<") op = ">";
          else if (op == "<=") op = ">=";
          else if (op == ">") op = "<";
          else if (op == ">=") op = "<=";
        }
        if (!scalar(*var) || !num(*bound)) return std::nullopt;
        if (op == ">" || op == ">=") {
          if (lo) return std::nullopt;
          lo = std::pair{bound->number, op == ">="};
        } else if (op == "<" || op == "<=") {
          if (hi) return std::nullopt;
          hi = std::pair{bound->number, op == "<="};
        } else {
          return std::nullopt;
        }
      }
      if (!lo || !hi) return std::nullopt;
      return ValueRange{lo->first, hi->first, lo->second, hi->second};
    }
    return std::nullopt;
  }

  // ---- decision block -----------------------------------------------------

  DecisionSummary make(DecisionType type, MappingOrder order, std::vector<TargetClass> classes) const {
    DecisionSummary s;
    s.app_id = app_id_;
    s.decision_type = type;
    s.order = order;
    s.classes = std::move(classes);
    s.theta = theta_;
    return s;
  }

  TargetClass label_class(const std::string& name) const { return {name, lists_.at(name).labels}; }

  // Optional fallthrough `return <literal>` then end of program.
  const Stmt* trailing_return(std::size_t i) const {
    if (i >= prog_.size()) return nullptr;
    const Stmt& s = prog_[i];
    if (s.kind != Stmt::Kind::Return) reject("unsupported pattern: statement after the decision block", s.pos);
    if (s.value && !is_literal(*s.value) && !(s.value->kind == Expr::Kind::Name && collections_.count(s.value->text)))
      reject("unsupported pattern: fallthrough must return a literal", s.value->pos);
    if (i + 1 < prog_.size()) reject("unsupported pattern: statement after the decision block", prog_[i + 1].pos);
    return &s;
  }

  static bool returns_bool(const Stmt* s, bool b) {
    return s && s->value && s->value->kind == Expr::Kind::Bool && s->value->boolean == b;
  }

  const Stmt& require_collection_return(std::size_t i, const std::string& coll, Position owner) const {
    const Stmt* ret = trailing_return(i);
    if (!ret || !ret->value || !ret->value->is_name(coll))
      reject("unsupported pattern: multi-select collection '" + coll + "' must be returned after the decision block",
             ret ? ret->pos : owner);
    return *ret;
  }

  DecisionSummary decision_block(std::size_t i) {
    const Stmt& first = prog_[i];
    if (first.kind == Stmt::Kind::For) return loop_pattern(i);
    if (first.kind == Stmt::Kind::If) return chain_pattern(i);
    if (first.kind == Stmt::Kind::Return) reject("no target classes found", first.pos);
    reject("unsupported pattern: expected a loop or if-chain decision block", first.pos);
  }

  DecisionSummary loop_pattern(std::size_t i) {
    const Stmt& loop = prog_[i];
    const Expr& iter = *loop.value;
    bool annotation_loop = false;
    if (is_annotations(iter)) annotation_loop = true;
    else if (!(iter.kind == Expr::Kind::Name && labels_vars_.count(iter.text)))
      reject("unsupported pattern: loop must iterate over the API result labels", loop.pos);
    if (loop.body.empty()) reject("no target classes found", loop.pos);

    std::vector<std::string> names;
    std::vector<Leaf> leaves;
    for (const Stmt& s : loop.body) {
      if (s.kind != Stmt::Kind::If || s.branches.size() != 1 || s.has_else)
        reject("unsupported pattern: loop body must be a run of single-branch membership tests", s.pos);
      const auto cls = membership_test(s.branches[0].cond, loop.target, annotation_loop);
      if (!cls) reject("unsupported pattern: loop condition must be a class membership test", s.branches[0].cond.pos);
      names.push_back(*cls);
      leaves.push_back(leaf_of(s.branches[0].body, s.pos));
    }
    const LeafKind kind = leaves.front().kind;
    for (const auto& l : leaves)
      if (l.kind != kind) reject("unsupported pattern: mixed return and append leaves", l.pos);

    std::vector<TargetClass> classes;
    for (const auto& n : names) classes.push_back(label_class(n));

    if (kind == LeafKind::Append) {
      const std::string coll = leaves.front().collection;
      for (const auto& l : leaves)
        if (l.collection != coll) reject("unsupported pattern: appends to more than one collection", l.pos);
      require_collection_return(i + 1, coll, loop.pos);
      return make(DecisionType::MultiSelect, MappingOrder::NotApplicable, std::move(classes));
    }

    const Stmt* fall = trailing_return(i + 1);
    const bool any_bool = std::any_of(leaves.begin(), leaves.end(), [](const Leaf& l) { return l.returns_any_bool(); });
    if (any_bool) {
      if (leaves.size() != 1 || !leaves.front().returns_bool(true) || !returns_bool(fall, false))
        reject("unsupported pattern: boolean decision needs one class returning True and a False fallthrough",
               leaves.front().pos);
      return make(DecisionType::TrueFalse, MappingOrder::NotApplicable, std::move(classes));
    }
    if (fall && fall->value && fall->value->kind == Expr::Kind::Bool)
      reject("unsupported pattern: boolean fallthrough without boolean branches", fall->pos);
    return make(DecisionType::MultiChoice, MappingOrder::ApiOutput, std::move(classes));
  }

  DecisionSummary chain_pattern(std::size_t i) {
    // Gather the run of consecutive `if` statements.
    std::vector<const Stmt*> ifs;
    std::size_t j = i;
    while (j < prog_.size() && prog_[j].kind == Stmt::Kind::If) ifs.push_back(&prog_[j++]);
    const bool single_chain = ifs.size() == 1;
    if (!single_chain) {
      for (const Stmt* s : ifs)
        if (s->branches.size() != 1 || s->has_else)
          reject("unsupported pattern: mixing if/elif chains with separate if statements", s->pos);
    }

    struct Arm {
      std::optional<std::string> cls;
      std::optional<ValueRange> range;
      Leaf leaf;
    };
    std::vector<Arm> arms;
    for (const Stmt* s : ifs) {
      for (const auto& b : s->branches) {
        Arm arm;
        if (api_ == ApiKind::Scalar) {
          arm.range = range_test(b.cond);
          if (!arm.range) reject("unsupported pattern: condition must compare the scalar against constants", b.cond.pos);
        } else {
          arm.cls = intersection_test(b.cond);
          if (!arm.cls) reject("unsupported pattern: condition must be intersects(labels, Class)", b.cond.pos);
        }
        arm.leaf = leaf_of(b.body, b.pos);
        arms.push_back(std::move(arm));
      }
    }
    const Stmt& head = *ifs.front();
    std::optional<Leaf> else_leaf;
    if (single_chain && head.has_else) else_leaf = leaf_of(head.body, head.else_pos);

    const LeafKind kind = arms.front().leaf.kind;
    for (const auto& a : arms)
      if (a.leaf.kind != kind) reject("unsupported pattern: mixed return and append leaves", a.leaf.pos);

    if (kind == LeafKind::Append) {
      if (api_ == ApiKind::Scalar) reject("unsupported pattern: multi-select over a scalar", arms.front().leaf.pos);
      if (single_chain && (head.branches.size() > 1 || head.has_else))
        reject("unsupported pattern: multi-select needs separate if statements, not elif/else", head.pos);
      const std::string coll = arms.front().leaf.collection;
      std::vector<TargetClass> classes;
      for (const auto& a : arms) {
        if (a.leaf.collection != coll) reject("unsupported pattern: appends to more than one collection", a.leaf.pos);
        classes.push_back(label_class(*a.cls));
      }
      require_collection_return(j, coll, head.pos);
      return make(DecisionType::MultiSelect, MappingOrder::NotApplicable, std::move(classes));
    }

    const Stmt* fall = trailing_return(j);
    if (else_leaf && fall) reject("unsupported pattern: statement after if/else that always returns", fall->pos);

    const bool any_bool = std::any_of(arms.begin(), arms.end(), [](const Arm& a) { return a.leaf.returns_any_bool(); });
    if (any_bool) {
      const bool negative_ok = else_leaf ? else_leaf->returns_bool(false) : returns_bool(fall, false);
      if (arms.size() != 1 || !arms.front().leaf.returns_bool(true) || !negative_ok)
        reject("unsupported pattern: boolean decision needs one condition returning True and a False branch",
               arms.front().leaf.pos);
      TargetClass c;
      if (api_ == ApiKind::Scalar) {
        c.name = scalar_name_;
        c.matcher = *arms.front().range;
      } else {
        c = label_class(*arms.front().cls);
      }
      return make(DecisionType::TrueFalse, MappingOrder::NotApplicable, {std::move(c)});
    }
    if ((else_leaf && else_leaf->returns_any_bool()) || (fall && fall->value && fall->value->kind == Expr::Kind::Bool))
      reject("unsupported pattern: boolean fallthrough without boolean branches", head.pos);

    std::vector<TargetClass> classes;
    for (const auto& a : arms) {
      if (api_ == ApiKind::Scalar) {
        if (!a.leaf.value || a.leaf.value->kind != Expr::Kind::Str)
          reject("unsupported pattern: range branches must return the class name as a string", a.leaf.pos);
        classes.push_back({a.leaf.value->text, *a.range});
      } else {
        classes.push_back(label_class(*a.cls));
      }
    }
    return make(DecisionType::MultiChoice, MappingOrder::AppChoice, std::move(classes));
  }

  const source::Program& prog_;
  std::string app_id_;
  double theta_;
  std::map<std::string, ListDef> lists_;
  std::set<std::string> used_;
  std::set<std::string> defined_;
  std::set<std::string> collections_;
  std::set<std::string> labels_vars_;
  std::set<std::string> scalar_vars_;
  std::optional<ApiKind> api_;
  std::string response_;
  std::string scalar_name_;
};

}  // namespace extract_detail

/// Extracts the decision-process summary. On failure `summary` is empty and
/// `diagnostics` carries the first error with its position.
/// `app_id` defaults to the file stem of `src.path`.
inline ExtractResult parse_source(const source::SourceUnit& src, double default_theta = kDefaultTheta,
                                  std::optional<std::string> app_id = std::nullopt) {
  ExtractResult result;
  const std::string id = app_id.value_or(src.stem());
  try {
    const source::Program prog = source::parse_program(src.text);
    extract_detail::Extractor ex(prog, id.empty() ? "app" : id, default_theta);
    std::vector<ParseDiagnostic> warnings;
    DecisionSummary summary = ex.run(warnings);
    const auto report = validate_summary(summary);
    if (!report.ok()) {
      const source::Position p = prog.empty() ? source::Position{} : prog.front().pos;
      for (const auto& v : report.violations)
        result.diagnostics.push_back({ParseDiagnostic::Severity::Error, v.message, p.line, p.column});
      return result;
    }
    result.diagnostics = std::move(warnings);
    result.summary = std::move(summary);
  } catch (const source::SourceError& e) {
    result.diagnostics.push_back(
        {ParseDiagnostic::Severity::Error, e.what(), e.position().line, e.position().column});
  }
  return result;
}

// ---------------------------------------------------------------------------
// Canonical rendering

namespace render_detail {

inline std::string quote(std::string_view s) {
  std::string out = "'";
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\'': out += "\\'"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out.push_back(c);
    }
  }
  out += "'";
  return out;
}

inline std::string number(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  std::string s(buf, ptr);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

inline bool reserved(std::string_view name) {
  static constexpr std::string_view kNames[] = {"response", "labels", "obj", "selected", "intersects",
                                                "client", "image", "types", "score", "document"};
  for (auto n : kNames)
    if (n == name) return true;
  return false;
}

}  // namespace render_detail

/// Emits the canonical source for a summary; parse_source of the result with
/// the summary's theta gives the summary back. The unit's path is
/// `<app_id>.py` so the default application id survives the round trip.
inline source::SourceUnit render_canonical(const DecisionSummary& summary) {
  using render_detail::quote;
  const auto report = validate_summary(summary);
  CHAMELEON_REQUIRE(report.ok(), ErrorCode::InvalidInput, "cannot render invalid summary: " + report.to_string());

  std::string out;
  auto line = [&](int indent, const std::string& text) {
    out.append(static_cast<std::size_t>(indent) * 4, ' ');
    out += text;
    out += '\n';
  };

  if (summary.is_range_kind()) {
    CHAMELEON_REQUIRE(summary.decision_type == DecisionType::MultiChoice, ErrorCode::Unsupported,
                      "unsupported render: value-range TRUE_FALSE summaries have no canonical form");
    line(0, "document = types.Document(content=text)");
    line(0, "response = client.analyze_sentiment(document=document)");
    line(0, "score = response.document_sentiment.score");
    bool first = true;
    for (const auto& c : summary.classes) {
      const auto& r = c.range();
      const std::string cond = render_detail::number(r.lo) + (r.lo_inclusive ? " <= " : " < ") + "score" +
                               (r.hi_inclusive ? " <= " : " < ") + render_detail::number(r.hi);
      line(0, std::string(first ? "if " : "elif ") + cond + ":");
      line(1, "return " + quote(c.name));
      first = false;
    }
    return {summary.app_id + ".py", out};
  }

  for (const auto& c : summary.classes) {
    CHAMELEON_REQUIRE(source::is_identifier(c.name) && !render_detail::reserved(c.name), ErrorCode::Unsupported,
                      "unsupported render: class name '" + c.name + "' is not a usable identifier");
    std::string list = c.name + " = [";
    for (std::size_t i = 0; i < c.labels().size(); ++i) {
      if (i) list += ", ";
      list += quote(c.labels()[i]);
    }
    line(0, list + "]");
  }
  line(0, "image = types.Image(content=content)");
  line(0, "response = client.label_detection(image=image)");

  switch (summary.decision_type) {
    case DecisionType::TrueFalse:
      line(0, "labels = [obj.name for obj in response.label_annotations]");
      line(0, "if intersects(labels, " + summary.classes.front().name + "):");
      line(1, "return True");
      line(0, "else:");
      line(1, "return False");
      break;
    case DecisionType::MultiSelect:
      line(0, "selected = []");
      line(0, "for obj in response.label_annotations:");
      for (const auto& c : summary.classes) {
        line(1, "if obj.name in " + c.name + ":");
        line(2, "selected.append(" + quote(c.name) + ")");
      }
      line(0, "return selected");
      break;
    case DecisionType::MultiChoice:
      if (summary.order == MappingOrder::ApiOutput) {
        line(0, "for obj in response.label_annotations:");
        for (const auto& c : summary.classes) {
          line(1, "if obj.name in " + c.name + ":");
          line(2, "return " + quote(c.name));
        }
      } else {
        line(0, "labels = [obj.name for obj in response.label_annotations]");
        bool first = true;
        for (const auto& c : summary.classes) {
          line(0, std::string(first ? "if" : "elif") + " intersects(labels, " + c.name + "):");
          line(1, "return " + quote(c.name));
          first = false;
        }
      }
      break;
  }
  return {summary.app_id + ".py", out};
}

}  // namespace chameleon
