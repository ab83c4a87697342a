#include "winrat/proof_io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <unordered_map>

namespace winrat {

namespace {

class MemorySource final : public ByteSource {
 public:
  explicit MemorySource(std::string data) : data_(std::move(data)) {}
  size_t read_at(uint64_t offset, std::span<char> out) override {
    if (offset >= data_.size()) return 0;
    size_t n = std::min(out.size(), data_.size() - static_cast<size_t>(offset));
    std::copy_n(data_.data() + offset, n, out.data());
    return n;
  }

 private:
  std::string data_;
};

class FileSource final : public ByteSource {
 public:
  explicit FileSource(const std::string& path) {
    file_ = std::fopen(path.c_str(), "rb");
    if (!file_) throw std::runtime_error("cannot open proof file: " + path);
  }
  ~FileSource() override {
    if (file_) std::fclose(file_);
  }
  size_t read_at(uint64_t offset, std::span<char> out) override {
    if (std::fseek(file_, static_cast<long>(offset), SEEK_SET) != 0) return 0;
    return std::fread(out.data(), 1, out.size(), file_);
  }

 private:
  std::FILE* file_ = nullptr;
};

// Buffered forward scanner over a ByteSource with absolute offsets.
class Scanner {
 public:
  explicit Scanner(ByteSource& src) : src_(src) { fill(); }

  uint64_t offset() const { return base_ + pos_; }
  bool at_eof() { return peek() == EOF_CHAR; }

  int peek() {
    if (pos_ >= len_) fill();
    return pos_ < len_ ? static_cast<unsigned char>(buf_[pos_]) : EOF_CHAR;
  }

  void bump() {
    if (pos_ < len_) ++pos_;
    if (pos_ >= len_) fill();
  }

  void skip_ws_and_comments() {
    for (;;) {
      int c = peek();
      if (c == EOF_CHAR) return;
      if (std::isspace(c)) {
        bump();
      } else if (c == 'c') {
        while (peek() != '\n' && peek() != EOF_CHAR) bump();
      } else {
        return;
      }
    }
  }

  // Signed integer token; throws on junk or overflow.
  int64_t read_int() {
    uint64_t at = offset();
    bool neg = false;
    int c = peek();
    if (c == '-') {
      neg = true;
      bump();
      c = peek();
    }
    if (c == EOF_CHAR || !std::isdigit(c))
      throw ParseError("expected integer in proof", at);
    int64_t v = 0;
    while (std::isdigit(peek())) {
      v = v * 10 + (peek() - '0');
      if (v > (int64_t{1} << 31))
        throw ParseError("literal out of range", at);
      bump();
    }
    int next = peek();
    if (next != EOF_CHAR && !std::isspace(next))
      throw ParseError("junk after integer", offset());
    return neg ? -v : v;
  }

 private:
  static constexpr int EOF_CHAR = -1;

  void fill() {
    if (pos_ < len_) return;
    base_ += len_;
    pos_ = 0;
    len_ = src_.read_at(base_, std::span<char>(buf_, sizeof buf_));
  }

  ByteSource& src_;
  char buf_[1 << 16];
  uint64_t base_ = 0;
  size_t pos_ = 0;
  size_t len_ = 0;
};

}  // namespace

std::unique_ptr<ByteSource> make_memory_source(std::string data) {
  return std::make_unique<MemorySource>(std::move(data));
}

std::unique_ptr<ByteSource> make_file_source(const std::string& path) {
  return std::make_unique<FileSource>(path);
}

// ---------------------------------------------------------------- DIMACS --

Formula parse_dimacs(std::string_view text, bool strict,
                     std::vector<std::string>* warnings) {
  auto warn = [&](std::string msg) {
    if (warnings) warnings->push_back(std::move(msg));
  };

  Formula f;
  size_t i = 0;
  uint64_t line = 1;
  bool saw_header = false;
  std::vector<int> raw;

  auto skip_space_on_line = [&] {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == '\r'))
      ++i;
  };

  auto read_int = [&]() -> int64_t {
    bool neg = false;
    if (i < text.size() && text[i] == '-') {
      neg = true;
      ++i;
    }
    if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i])))
      throw ParseError("expected integer", line);
    int64_t v = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      v = v * 10 + (text[i] - '0');
      if (v > (int64_t{1} << 31)) throw ParseError("integer out of range", line);
      ++i;
    }
    if (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])))
      throw ParseError("junk after integer", line);
    return neg ? -v : v;
  };

  while (i < text.size()) {
    skip_space_on_line();
    if (i >= text.size()) break;
    char c = text[i];
    if (c == '\n') {
      ++i;
      ++line;
      continue;
    }
    if (c == 'c') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    if (c == 'p') {
      if (saw_header) throw ParseError("duplicate header", line);
      size_t eol = text.find('\n', i);
      std::string_view h = text.substr(i, eol == std::string_view::npos
                                              ? text.size() - i
                                              : eol - i);
      unsigned long long v = 0, n = 0;
      if (std::sscanf(std::string(h).c_str(), "p cnf %llu %llu", &v, &n) != 2)
        throw ParseError("malformed header, expected 'p cnf V C'", line);
      f.num_vars = static_cast<uint32_t>(v);
      f.declared_clauses = static_cast<uint32_t>(n);
      saw_header = true;
      i = (eol == std::string_view::npos) ? text.size() : eol;
      continue;
    }
    if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) {
      if (!saw_header) throw ParseError("clause before 'p cnf' header", line);
      int64_t v = read_int();
      if (v == 0) {
        f.clauses.push_back(normalize_clause(std::span<const int>(raw)).clause);
        raw.clear();
      } else {
        uint32_t var = static_cast<uint32_t>(v < 0 ? -v : v);
        if (var > f.num_vars) {
          if (strict)
            throw ParseError("variable " + std::to_string(var) +
                                 " exceeds declared maximum",
                             line);
          warn("variable " + std::to_string(var) +
               " exceeds declared maximum, growing");
          f.num_vars = var;
        }
        raw.push_back(static_cast<int>(v));
      }
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line);
  }

  if (!saw_header) throw ParseError("missing 'p cnf' header", line);
  if (!raw.empty()) throw ParseError("unterminated final clause", line);
  if (f.clauses.size() != f.declared_clauses)
    warn("header declares " + std::to_string(f.declared_clauses) +
         " clauses, file has " + std::to_string(f.clauses.size()));
  return f;
}

// ------------------------------------------------------------------ DRAT --

std::optional<ParsedProofLine> parse_proof_line(std::string_view text) {
  auto src = MemorySource(std::string(text));
  Scanner sc(src);
  sc.skip_ws_and_comments();
  if (sc.at_eof()) return std::nullopt;

  ParsedProofLine out;
  out.kind = ProofStep::Kind::kAdd;
  if (sc.peek() == 'd') {
    sc.bump();
    if (!std::isspace(sc.peek()))
      throw ParseError("junk after 'd'", sc.offset());
    out.kind = ProofStep::Kind::kDelete;
  }
  for (;;) {
    sc.skip_ws_and_comments();
    if (sc.at_eof())
      throw ParseError("proof step missing 0 terminator", sc.offset());
    int64_t v = sc.read_int();
    if (v == 0) break;
    out.raw_lits.push_back(static_cast<int>(v));
  }
  return out;
}

ProofDB load_proof(std::unique_ptr<ByteSource> source, size_t budget) {
  ProofDB db;
  db.budget_ = budget;
  Scanner sc(*source);

  auto note_var = [&db](uint32_t var, uint32_t step_pos) {
    if (var > db.max_var) db.max_var = var;
    if (db.first_seen_step.size() <= var)
      db.first_seen_step.resize(var + 1, kUnseen);
    if (db.first_seen_step[var] == kUnseen) db.first_seen_step[var] = step_pos;
  };

  std::vector<int> raw;
  for (;;) {
    sc.skip_ws_and_comments();
    if (sc.at_eof()) break;

    uint64_t at = sc.offset();
    bool is_delete = false;
    if (sc.peek() == 'd') {
      sc.bump();
      if (!std::isspace(sc.peek())) throw ParseError("junk after 'd'", at);
      is_delete = true;
    }

    raw.clear();
    for (;;) {
      sc.skip_ws_and_comments();
      if (sc.at_eof())
        throw ParseError("proof step missing 0 terminator", sc.offset());
      int64_t v = sc.read_int();
      if (v == 0) break;
      raw.push_back(static_cast<int>(v));
    }

    uint32_t step_pos = static_cast<uint32_t>(db.steps.size() + 1);
    NormalizedClause norm = normalize_clause(std::span<const int>(raw));
    for (Lit l : norm.clause.lits) note_var(l.var(), step_pos);

    if (is_delete) {
      DeleteRecord d;
      d.clause = std::move(norm.clause);
      d.offset = at;
      d.step_pos = step_pos;
      db.steps.push_back({ProofStep::Kind::kDelete,
                          static_cast<uint32_t>(db.deletes.size()), at});
      db.deletes.push_back(std::move(d));
    } else {
      InferenceRecord r;
      r.clause = std::move(norm.clause);
      r.pivot_hint = raw.empty() ? Lit() : Lit::from_dimacs(raw[0]);
      r.len = static_cast<uint32_t>(r.clause.len());
      r.offset = at;
      r.hash = clause_hash(r.clause);
      r.step_pos = step_pos;
      r.tautology = norm.tautology;
      r.resident = true;
      uint32_t idx = static_cast<uint32_t>(db.inferences.size());
      db.steps.push_back({ProofStep::Kind::kAdd, idx, at});
      db.inferences.push_back(std::move(r));
      if (db.inferences[idx].len == 0 && !db.empty_at) db.empty_at = idx;
      db.resident_.insert(idx);
    }
  }

  db.source_ = std::move(source);
  db.enforce_budget();
  return db;
}

const Clause& ProofDB::inference_clause(uint32_t i) {
  InferenceRecord& r = inferences.at(i);
  if (!r.resident) reload_inference(i);
  return r.clause;
}

const Clause& ProofDB::reload_inference(uint32_t i) {
  InferenceRecord& r = inferences.at(i);
  if (r.resident) return r.clause;
  if (!source_) throw ProofIntegrityError("no proof source to reload from");

  // Steps are short; retry with a doubled window if one does not cover it.
  for (size_t window = 1 << 12;; window *= 2) {
    std::string buf(window, '\0');
    size_t got = source_->read_at(r.offset, std::span<char>(buf.data(), buf.size()));
    buf.resize(got);
    std::optional<ParsedProofLine> line;
    try {
      line = parse_proof_line(buf);
    } catch (const ParseError&) {
      if (got == window) continue;  // step may be cut off mid-token
      throw ProofIntegrityError("inference " + std::to_string(i) +
                                " no longer parses at its offset");
    }
    if (!line || line->kind != ProofStep::Kind::kAdd)
      throw ProofIntegrityError("inference " + std::to_string(i) +
                                " no longer parses at its offset");
    NormalizedClause norm =
        normalize_clause(std::span<const int>(line->raw_lits));
    if (norm.clause.len() != r.len || clause_hash(norm.clause) != r.hash)
      throw ProofIntegrityError("inference " + std::to_string(i) +
                                " changed under its offset");
    r.clause = std::move(norm.clause);
    r.resident = true;
    ++reloads;
    // No immediate budget enforcement: the caller is about to use this
    // body. Callers re-enforce once done with it.
    if (!r.active) resident_.insert(i);
    return r.clause;
  }
}

void ProofDB::evict(uint32_t i) {
  InferenceRecord& r = inferences.at(i);
  if (!r.resident || r.active || r.promoted) return;
  r.clause.lits.clear();
  r.clause.lits.shrink_to_fit();
  r.resident = false;
  resident_.erase(i);
  ++evictions;
}

void ProofDB::enforce_budget() {
  while (resident_.size() > budget_) evict(*resident_.begin());
}

void ProofDB::mark_active(uint32_t i, bool active) {
  InferenceRecord& r = inferences.at(i);
  if (r.active == active) return;
  r.active = active;
  if (active) {
    resident_.erase(i);
  } else if (r.resident && !r.promoted) {
    resident_.insert(i);
    enforce_budget();
  }
}

// ------------------------------------------------------------- deletions --

namespace {
struct LiveRef {
  bool formula;
  uint32_t index;
  uint32_t add_pos;  // 0 for formula clauses, step position for inferences
};
}  // namespace

DeletionResolution resolve_deletions(ProofDB& db, const Formula& f,
                                     uint32_t limit_step,
                                     std::vector<std::string>* warnings) {
  DeletionResolution res;
  res.formula_delete_step.assign(f.clauses.size(), kNeverDeleted);

  std::unordered_multimap<uint64_t, LiveRef> table;
  table.reserve(f.clauses.size() + db.inferences.size());
  for (uint32_t fi = 0; fi < f.clauses.size(); ++fi)
    table.emplace(clause_hash(f.clauses[fi]), LiveRef{true, fi, 0});

  for (const ProofStep& step : db.steps) {
    uint32_t pos = (step.kind == ProofStep::Kind::kAdd)
                       ? db.inferences[step.index].step_pos
                       : db.deletes[step.index].step_pos;
    if (pos > limit_step) break;

    if (step.kind == ProofStep::Kind::kAdd) {
      table.emplace(db.inferences[step.index].hash,
                    LiveRef{false, step.index, pos});
      continue;
    }

    DeleteRecord& del = db.deletes[step.index];
    uint64_t h = clause_hash(del.clause);
    auto [lo, hi] = table.equal_range(h);
    // Hash match is only a candidate; compare full content, and among
    // several matches remove the most recently added one.
    auto best = table.end();
    for (auto it = lo; it != hi; ++it) {
      const Clause& cand = it->second.formula
                               ? f.clauses[it->second.index]
                               : db.inference_clause(it->second.index);
      if (cand == del.clause &&
          (best == table.end() || it->second.add_pos > best->second.add_pos))
        best = it;
    }
    if (best == table.end()) {
      del.target = DeleteRecord::Target::kNoMatch;
      ++res.unmatched;
      if (warnings)
        warnings->push_back("delete step at offset " +
                            std::to_string(del.offset) +
                            " matches no live clause");
      continue;
    }
    if (best->second.formula) {
      del.target = DeleteRecord::Target::kFormula;
      del.target_index = best->second.index;
      res.formula_delete_step[best->second.index] = pos;
    } else {
      del.target = DeleteRecord::Target::kInference;
      del.target_index = best->second.index;
      db.inferences[best->second.index].delete_step = pos;
    }
    ++res.matched;
    table.erase(best);
  }

  res.table_size_end = table.size();
  db.enforce_budget();
  return res;
}

std::string to_drat(ProofDB& db) {
  std::string out;
  auto put_clause = [&out](const Clause& c, Lit first) {
    if (first.valid()) {
      out += std::to_string(first.to_dimacs());
      out += ' ';
    }
    for (Lit l : c.lits) {
      if (l == first) continue;
      out += std::to_string(l.to_dimacs());
      out += ' ';
    }
    out += "0\n";
  };

  for (const ProofStep& step : db.steps) {
    if (step.kind == ProofStep::Kind::kAdd) {
      const InferenceRecord& r = db.inferences[step.index];
      put_clause(db.inference_clause(step.index), r.pivot_hint);
    } else {
      out += "d ";
      put_clause(db.deletes[step.index].clause, Lit());
    }
  }
  return out;
}

}  // namespace winrat
