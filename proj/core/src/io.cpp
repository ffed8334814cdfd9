#include "zhyvot/io.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace zhyvot {

namespace {

struct Line {
  unsigned number;
  std::vector<std::string> tokens;
  std::vector<unsigned> columns;
};

std::vector<Line> tokenize(const std::string& text) {
  std::vector<Line> lines;
  unsigned number = 0;
  std::istringstream in(text);
  std::string raw;
  while (std::getline(in, raw)) {
    ++number;
    Line line{number, {}, {}};
    size_t i = 0;
    while (i < raw.size()) {
      if (std::isspace(static_cast<unsigned char>(raw[i]))) {
        ++i;
        continue;
      }
      if (raw[i] == '#') break;  // comment to end of line
      size_t start = i;
      while (i < raw.size() && !std::isspace(static_cast<unsigned char>(raw[i]))) ++i;
      line.tokens.push_back(raw.substr(start, i - start));
      line.columns.push_back(static_cast<unsigned>(start + 1));
    }
    if (!line.tokens.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

unsigned long parse_uint(const Line& line, size_t idx, const char* what) {
  if (idx >= line.tokens.size())
    throw ParseError(line.number, 1, std::string("missing ") + what);
  const std::string& t = line.tokens[idx];
  if (t.empty() || !std::all_of(t.begin(), t.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    throw ParseError(line.number, line.columns[idx], std::string("expected non-negative integer for ") + what + ", got '" + t + "'");
  return std::stoul(t);
}

bool is_section(const std::string& token) { return token.size() >= 2 && token.front() == '[' && token.back() == ']'; }

}  // namespace

GraphDocument parse_graph_document(const std::string& text) {
  GraphDocument doc;
  bool saw_meta = false;
  enum class Section { None, Meta, Vertices, Edges, Stubs };
  Section section = Section::None;

  // Two passes so edges can reference vertices declared later.
  std::vector<std::tuple<Line, EdgeId, VertexId, VertexId, bool>> pending_edges;

  for (const Line& line : tokenize(text)) {
    const std::string& head = line.tokens[0];
    if (is_section(head)) {
      if (head == "[meta]") {
        section = Section::Meta;
        saw_meta = true;
        for (size_t i = 1; i < line.tokens.size(); ++i) {
          const std::string& kv = line.tokens[i];
          auto eq = kv.find('=');
          if (eq == std::string::npos)
            throw ParseError(line.number, line.columns[i], "expected key=value in [meta]");
          std::string key = kv.substr(0, eq);
          std::string value = kv.substr(eq + 1);
          if (key == "q")
            doc.q = static_cast<unsigned>(std::stoul(value));
          else if (key == "depth")
            doc.depth = static_cast<unsigned>(std::stoul(value));
          else
            throw ParseError(line.number, line.columns[i], "unknown [meta] key '" + key + "'");
        }
        continue;
      }
      if (head == "[vertices]") {
        section = Section::Vertices;
        continue;
      }
      if (head == "[edges]") {
        section = Section::Edges;
        continue;
      }
      if (head == "[stubs]") {
        section = Section::Stubs;
        continue;
      }
      throw ParseError(line.number, line.columns[0], "unknown section '" + head + "'");
    }

    switch (section) {
      case Section::None:
        throw ParseError(line.number, line.columns[0], "content before any section header");
      case Section::Meta: {
        const std::string& kv = head;
        auto eq = kv.find('=');
        if (eq == std::string::npos)
          throw ParseError(line.number, line.columns[0], "expected key=value in [meta]");
        std::string key = kv.substr(0, eq);
        if (key == "q")
          doc.q = static_cast<unsigned>(std::stoul(kv.substr(eq + 1)));
        else if (key == "depth")
          doc.depth = static_cast<unsigned>(std::stoul(kv.substr(eq + 1)));
        else
          throw ParseError(line.number, line.columns[0], "unknown [meta] key '" + key + "'");
        break;
      }
      case Section::Vertices: {
        VertexId id = static_cast<VertexId>(parse_uint(line, 0, "vertex id"));
        if (line.tokens.size() != 2 || (line.tokens[1] != "core" && line.tokens[1] != "tree"))
          throw ParseError(line.number, line.columns.back(), "expected '<id> core|tree'");
        if (doc.graph.has_vertex(id))
          throw ParseError(line.number, line.columns[0], "duplicate vertex id " + std::to_string(id));
        doc.graph.add_vertex(id);
        if (line.tokens[1] == "core")
          doc.core_vertices.insert(id);
        else
          doc.has_tree_parts = true;
        break;
      }
      case Section::Edges: {
        EdgeId id = static_cast<EdgeId>(parse_uint(line, 0, "edge id"));
        VertexId src = static_cast<VertexId>(parse_uint(line, 1, "edge source"));
        VertexId dst = static_cast<VertexId>(parse_uint(line, 2, "edge target"));
        if (line.tokens.size() != 4 || (line.tokens[3] != "core" && line.tokens[3] != "tree"))
          throw ParseError(line.number, line.columns.back(), "expected '<id> <src> <dst> core|tree'");
        pending_edges.push_back({line, id, src, dst, line.tokens[3] == "core"});
        break;
      }
      case Section::Stubs: {
        VertexId v = static_cast<VertexId>(parse_uint(line, 0, "stub vertex"));
        unsigned count = static_cast<unsigned>(parse_uint(line, 1, "stub count"));
        if (line.tokens.size() != 2)
          throw ParseError(line.number, line.columns.back(), "expected '<vertex> <count>'");
        doc.stubs[v] = count;
        break;
      }
    }
  }

  if (!saw_meta) throw ParseError(1, 1, "missing [meta] section");
  for (const auto& [line, id, src, dst, core] : pending_edges) {
    if (!doc.graph.has_vertex(src))
      throw ParseError(line.number, line.columns[1], "edge references unknown vertex " + std::to_string(src));
    if (!doc.graph.has_vertex(dst))
      throw ParseError(line.number, line.columns[2], "edge references unknown vertex " + std::to_string(dst));
    if (doc.graph.has_edge(id))
      throw ParseError(line.number, line.columns[0], "duplicate edge id " + std::to_string(id));
    doc.graph.add_edge(id, src, dst);
    if (core)
      doc.core_edges.insert(id);
    else
      doc.has_tree_parts = true;
  }
  for (const auto& [v, count] : doc.stubs) {
    (void)count;
    if (!doc.graph.has_vertex(v))
      throw ParseError(1, 1, "[stubs] references unknown vertex " + std::to_string(v));
  }
  for (EdgeId e : doc.core_edges) {
    const Edge& ed = doc.graph.edge(e);
    if (!doc.core_vertices.count(ed.src) || !doc.core_vertices.count(ed.dst))
      throw StructuralError("core edge " + std::to_string(e) + " has a tree endpoint");
  }
  return doc;
}

ZhyvotGraph parse_graph(const std::string& text) {
  GraphDocument doc = parse_graph_document(text);
  if (doc.has_tree_parts)
    throw StructuralError(
        "document carries explicit tree parts; computing commands regenerate trees from [stubs]");
  ZhyvotGraph g(doc.graph, doc.q, doc.depth, doc.stubs);
  ZhyvotReport report = validate_zhyvot(doc.graph, doc.core_vertices, doc.core_edges);
  if (!report.passed()) throw StructuralError("zhyvot axioms violated:\n" + report.summary());
  return g;
}

std::string serialize_graph(const ZhyvotGraph& g) {
  std::ostringstream os;
  os << "[meta] q=" << g.q() << " depth=" << g.depth() << "\n";
  os << "[vertices]\n";
  for (VertexId v : g.core().vertices()) os << v << " core\n";
  os << "[edges]\n";
  for (const auto& [id, e] : g.core().edges()) os << id << " " << e.src << " " << e.dst << " core\n";
  os << "[stubs]\n";
  for (VertexId v : g.core().vertices()) os << v << " " << g.stub_count(v) << "\n";
  return os.str();
}

std::string serialize_expansion(const Expansion& x) {
  std::ostringstream os;
  os << "[meta] q=" << x.q() << " depth=" << x.depth() << "\n";
  os << "[vertices]\n";
  for (VertexId v : x.graph().vertices())
    os << v << " " << (x.in_core(v) ? "core" : "tree") << "\n";
  os << "[edges]\n";
  for (const auto& [id, e] : x.graph().edges())
    os << id << " " << e.src << " " << e.dst << " " << (x.core_edge(id) ? "core" : "tree") << "\n";
  os << "[stubs]\n";
  for (VertexId v : x.core_vertices()) os << v << " " << x.source().stub_count(v) << "\n";
  return os.str();
}

WeightDocument parse_weight_document(const std::string& text) {
  WeightDocument doc;
  bool saw_weight = false;
  bool saw_lambda = false;
  enum class Section { None, Weight, N };
  Section section = Section::None;
  for (const Line& line : tokenize(text)) {
    const std::string& head = line.tokens[0];
    if (is_section(head)) {
      if (head == "[weight]") {
        section = Section::Weight;
        saw_weight = true;
        for (size_t i = 1; i < line.tokens.size(); ++i) {
          const std::string& kv = line.tokens[i];
          if (kv.rfind("lambda=", 0) != 0)
            throw ParseError(line.number, line.columns[i], "expected lambda=<value>");
          try {
            doc.lambda = Scalar::parse(kv.substr(7));
          } catch (const ScalarError& err) {
            throw ParseError(line.number, line.columns[i], err.what());
          }
          saw_lambda = true;
        }
        continue;
      }
      if (head == "[n]") {
        section = Section::N;
        continue;
      }
      throw ParseError(line.number, line.columns[0], "unknown section '" + head + "'");
    }
    if (section == Section::Weight) {
      if (line.tokens.size() != 2)
        throw ParseError(line.number, line.columns[0], "expected '<vertex> <value>'");
      VertexId v = static_cast<VertexId>(parse_uint(line, 0, "vertex id"));
      try {
        doc.g[v] = Scalar::parse(line.tokens[1]);
      } catch (const ScalarError& err) {
        throw ParseError(line.number, line.columns[1], err.what());
      }
    } else if (section == Section::N) {
      if (line.tokens.size() != 2)
        throw ParseError(line.number, line.columns[0], "expected '<edge> 0|1'");
      EdgeId e = static_cast<EdgeId>(parse_uint(line, 0, "edge id"));
      unsigned long ne = parse_uint(line, 1, "n value");
      if (ne > 1)
        throw ParseError(line.number, line.columns[1], "n must be 0 or 1");
      doc.n[e] = static_cast<int>(ne);
    } else {
      throw ParseError(line.number, line.columns[0], "content before any section header");
    }
  }
  if (!saw_weight) throw ParseError(1, 1, "missing [weight] section");
  if (!saw_lambda) throw ParseError(1, 1, "missing lambda= in [weight]");
  return doc;
}

std::string serialize_weight(const WeightDocument& w) {
  std::ostringstream os;
  os << "[weight] lambda=" << w.lambda.to_string() << "\n";
  for (const auto& [v, val] : w.g) os << v << " " << val.to_string() << "\n";
  os << "[n]\n";
  for (const auto& [e, ne] : w.n) os << e << " " << ne << "\n";
  return os.str();
}

std::string serialize_weight(const SpecialWeight& w) {
  WeightDocument doc{w.lambda(), w.core_g(), w.n()};
  return serialize_weight(doc);
}

std::map<EdgeId, Scalar> parse_current_document(const std::string& text) {
  std::map<EdgeId, Scalar> values;
  bool saw = false;
  for (const Line& line : tokenize(text)) {
    const std::string& head = line.tokens[0];
    if (is_section(head)) {
      if (head != "[current]")
        throw ParseError(line.number, line.columns[0], "unknown section '" + head + "'");
      saw = true;
      continue;
    }
    if (!saw) throw ParseError(line.number, line.columns[0], "content before [current]");
    if (line.tokens.size() != 2)
      throw ParseError(line.number, line.columns[0], "expected '<edge> <integer>'");
    EdgeId e = static_cast<EdgeId>(parse_uint(line, 0, "edge id"));
    try {
      values[e] = Scalar::parse(line.tokens[1]);
    } catch (const ScalarError& err) {
      throw ParseError(line.number, line.columns[1], err.what());
    }
  }
  if (!saw) throw ParseError(1, 1, "missing [current] section");
  return values;
}

std::string serialize_current(const Expansion& x, const Current& c) {
  std::ostringstream os;
  os << "[current]\n";
  for (const auto& [id, e] : x.graph().edges()) {
    (void)e;
    Scalar v = c.at(id);
    if (!v.is_zero()) os << id << " " << v.to_string() << "\n";
  }
  return os.str();
}

Current bind_current(const Expansion& x, const std::map<EdgeId, Scalar>& values) {
  Current c;
  for (const auto& [id, e] : x.graph().edges()) {
    (void)e;
    c.mu[id] = Scalar(0);
  }
  for (const auto& [e, v] : values) {
    if (!x.graph().has_edge(e))
      throw StructuralError("current value on unknown edge " + std::to_string(e));
    c.mu[e] = v;
  }
  return c;
}

std::map<VertexId, Scalar> parse_virtual_document(const std::string& text) {
  std::map<VertexId, Scalar> values;
  bool saw = false;
  for (const Line& line : tokenize(text)) {
    const std::string& head = line.tokens[0];
    if (is_section(head)) {
      if (head != "[virtual]")
        throw ParseError(line.number, line.columns[0], "unknown section '" + head + "'");
      saw = true;
      continue;
    }
    if (!saw) throw ParseError(line.number, line.columns[0], "content before [virtual]");
    if (line.tokens.size() != 2)
      throw ParseError(line.number, line.columns[0], "expected '<vertex> <value>'");
    VertexId v = static_cast<VertexId>(parse_uint(line, 0, "vertex id"));
    try {
      values[v] = Scalar::parse(line.tokens[1]);
    } catch (const ScalarError& err) {
      throw ParseError(line.number, line.columns[1], err.what());
    }
  }
  if (!saw) throw ParseError(1, 1, "missing [virtual] section");
  return values;
}

std::string format_value(const Scalar& v, NumericMode mode) {
  if (mode == NumericMode::Exact) return v.to_string();
  std::ostringstream os;
  os.precision(15);
  os << v.to_double();
  return os.str();
}

std::string format_table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<size_t> width;
  for (const auto& row : rows)
    for (size_t i = 0; i < row.size(); ++i) {
      if (width.size() <= i) width.resize(i + 1, 0);
      width[i] = std::max(width[i], row[i].size());
    }
  std::ostringstream os;
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      os << row[i];
      if (i + 1 < row.size()) os << std::string(width[i] - row[i].size() + 2, ' ');
    }
    os << "\n";
  }
  return os.str();
}

std::string format_records(const std::string& kind,
                           const std::vector<std::vector<std::pair<std::string, std::string>>>& records) {
  std::ostringstream os;
  os << record_header << "\n";
  for (const auto& record : records) {
    os << kind;
    for (const auto& [k, v] : record) os << "\t" << k << "=" << v;
    os << "\n";
  }
  return os.str();
}

std::string serialize_algebra_element(const AlgebraElement& a) {
  auto path_text = [](const Path& p) {
    if (p.edges.empty()) return "v" + std::to_string(p.source);
    std::string out;
    for (EdgeId e : p.edges) out += (out.empty() ? "" : ".") + std::to_string(e);
    return out;
  };
  std::ostringstream os;
  os << "[algebra]\n";
  for (const auto& [m, coeff] : a.terms())
    os << path_text(m.mu) << " " << path_text(m.nu) << " " << coeff.to_string() << "\n";
  return os.str();
}

}  // namespace zhyvot
