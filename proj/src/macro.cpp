#include "wangforge/macro.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "wangforge/text_format.hpp"

namespace wangforge {

std::uint64_t fib_g(unsigned n) {
  std::uint64_t a = 1, b = 2;
  for (unsigned i = 0; i < n; ++i) {
    std::uint64_t c = a + b;
    a = b;
    b = c;
  }
  return a;
}

std::string singular_word(int n) {
  if (n < -2) throw WangError("singular words start at n = -2");
  std::vector<std::string> u = {"", "a", "b"};
  for (int k = 1; k <= n; ++k) {
    const std::size_t i = static_cast<std::size_t>(k + 2);
    u.push_back(u[i - 2] + u[i - 3] + u[i - 2]);
  }
  return u[static_cast<std::size_t>(n + 2)];
}

std::string fibonacci_word(std::size_t length) {
  std::string w = "a";
  while (w.size() < length) {
    std::string next;
    next.reserve(w.size() * 2);
    for (char c : w) next += c == 'a' ? "ab" : "a";
    w = std::move(next);
  }
  return w;
}

std::set<std::string> fibonacci_factors(std::size_t L) {
  std::set<std::string> factors;
  std::size_t length = 8 * L + 16;
  while (true) {
    std::string w = fibonacci_word(length);
    std::set<std::string> found;
    for (std::size_t k = 1; k <= L; ++k)
      for (std::size_t i = 0; i + k <= w.size(); ++i) found.insert(w.substr(i, k));
    if (found == factors) return factors;
    factors = std::move(found);
    length *= 2;
  }
}

Word parse_rle(std::string_view text) {
  Word out;
  if (text == "-") return out;
  std::size_t i = 0;
  auto fail = [&](const std::string& why) {
    throw WangError("bad run-length word '" + std::string(text) + "': " + why);
  };
  while (i < text.size()) {
    Word block;
    if (text[i] == '(') {
      std::size_t close = text.find(')', i);
      if (close == std::string_view::npos) fail("unbalanced parenthesis");
      for (std::size_t j = i + 1; j < close; ++j) {
        if (text[j] < '0' || text[j] > '9') fail("non-digit inside block");
        block.push_back(static_cast<ColorId>(text[j] - '0'));
      }
      i = close + 1;
    } else if (text[i] >= '0' && text[i] <= '9') {
      block.push_back(static_cast<ColorId>(text[i] - '0'));
      ++i;
    } else {
      fail("unexpected character");
    }
    std::size_t repeat = 1;
    if (i < text.size() && text[i] == '^') {
      std::size_t j = ++i;
      while (j < text.size() && text[j] >= '0' && text[j] <= '9') ++j;
      if (j == i) fail("missing exponent");
      repeat = std::stoul(std::string(text.substr(i, j - i)));
      i = j;
    }
    for (std::size_t r = 0; r < repeat; ++r) out.insert(out.end(), block.begin(), block.end());
  }
  return out;
}

std::string format_rle(const Word& w) {
  if (w.empty()) return "-";
  std::string out;
  bool after_exponent = false;
  std::size_t i = 0;
  while (i < w.size()) {
    if (w[i] > 9) throw WangError("run-length words use single-digit letters");
    std::size_t j = i;
    while (j < w.size() && w[j] == w[i]) ++j;
    const char letter = static_cast<char>('0' + w[i]);
    // A bare letter right after an exponent would read as another digit of it.
    if (after_exponent) out += std::string("(") + letter + ")";
    else out += letter;
    after_exponent = j - i > 1;
    if (after_exponent) out += "^" + std::to_string(j - i);
    i = j;
  }
  return out;
}

std::string word_digits(const Word& w) {
  std::string out;
  for (ColorId c : w) out += std::to_string(c);
  return out;
}

MacroTransducer read_macro(const std::string& text) {
  MacroTransducer m;
  bool header = false;
  for_each_content_line(text, [&](std::size_t line, std::string_view content) {
    std::istringstream in{std::string(content)};
    std::string kw;
    in >> kw;
    if (!header) {
      std::string version;
      in >> version;
      if (kw != "macro" || version != "v1") throw ParseError(line, "expected header 'macro v1'");
      header = true;
      return;
    }
    if (kw == "vcolors") {
      if (!(in >> m.v_count)) throw ParseError(line, "expected 'vcolors M'");
    } else if (kw == "state") {
      std::string name;
      if (!(in >> name)) throw ParseError(line, "expected 'state NAME'");
      if (std::find(m.states.begin(), m.states.end(), name) != m.states.end())
        throw ParseError(line, "duplicate state '" + name + "'");
      m.states.push_back(name);
    } else if (kw == "edge") {
      MacroEdge e;
      std::string in_word, out_word;
      if (!(in >> e.from >> e.to >> in_word >> out_word))
        throw ParseError(line, "expected 'edge FROM TO IN OUT'");
      in >> e.label;
      for (const std::string* s : {&e.from, &e.to})
        if (std::find(m.states.begin(), m.states.end(), *s) == m.states.end())
          throw ParseError(line, "unknown state '" + *s + "'");
      try {
        e.in = parse_rle(in_word);
        e.out = parse_rle(out_word);
      } catch (const ParseError&) {
        throw;
      } catch (const WangError& err) {
        throw ParseError(line, err.what());
      }
      if (e.in.size() != e.out.size()) throw ParseError(line, "word lengths differ");
      for (const Word* w : {&e.in, &e.out})
        for (ColorId c : *w)
          if (c >= m.v_count) throw ParseError(line, "letter out of range");
      m.edges.push_back(std::move(e));
    } else {
      throw ParseError(line, "unknown keyword '" + kw + "'");
    }
  });
  if (!header) throw ParseError(0, "missing 'macro v1' header");
  return m;
}

std::string write_macro(const MacroTransducer& m) {
  std::ostringstream out;
  out << "macro v1\n";
  if (m.v_count != 2) out << "vcolors " << m.v_count << "\n";
  for (const auto& s : m.states) out << "state " << s << "\n";
  for (const auto& e : m.edges) {
    out << "edge " << e.from << ' ' << e.to << ' ' << format_rle(e.in) << ' '
        << format_rle(e.out);
    if (!e.label.empty()) out << ' ' << e.label;
    out << "\n";
  }
  return out.str();
}

ExpandedMacro expand_macro(const MacroTransducer& m, const Budget& budget) {
  const std::size_t k = m.states.size();
  std::map<std::string, ColorId> index;
  for (std::size_t i = 0; i < k; ++i) index[m.states[i]] = static_cast<ColorId>(i);
  auto state_of = [&](const std::string& name) {
    auto it = index.find(name);
    if (it == index.end()) throw WangError("unknown macro state '" + name + "'");
    return it->second;
  };

  // Empty edges identify their endpoints.
  std::vector<ColorId> parent(k);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](ColorId x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t letters = 0;
  for (const auto& e : m.edges) {
    if (e.in.size() != e.out.size())
      throw WangError("macro edge " + e.from + "->" + e.to + " has words of different lengths");
    letters += e.in.size();
    if (e.in.empty()) {
      ColorId a = find(state_of(e.from)), b = find(state_of(e.to));
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  if (letters > budget.max_transitions || letters > budget.max_states)
    throw BudgetExceeded("macro expansion exceeds the budget", 0);

  std::vector<ColorId> macro_state(k);
  std::vector<std::string> names;
  std::vector<long> root_id(k, -1);
  for (std::size_t i = 0; i < k; ++i) {
    ColorId r = find(static_cast<ColorId>(i));
    if (root_id[r] < 0) {
      root_id[r] = static_cast<long>(names.size());
      names.push_back(m.states[r]);
    } else if (r != i) {
      names[root_id[r]] += "=" + m.states[i];
    }
    macro_state[i] = static_cast<ColorId>(root_id[r]);
  }

  struct Pending {
    Tile tile;
    MacroTag tag;
  };
  std::vector<Pending> pending;
  for (std::size_t ei = 0; ei < m.edges.size(); ++ei) {
    const auto& e = m.edges[ei];
    const std::size_t len = e.in.size();
    if (len == 0) continue;
    ColorId prev = macro_state[state_of(e.from)];
    const std::string base = e.label.empty() ? "e" + std::to_string(ei) : e.label;
    for (std::size_t j = 0; j < len; ++j) {
      ColorId next;
      if (j + 1 == len) {
        next = macro_state[state_of(e.to)];
      } else {
        next = static_cast<ColorId>(names.size());
        names.push_back(base + "." + std::to_string(j + 1));
      }
      if (e.in[j] >= m.v_count || e.out[j] >= m.v_count)
        throw WangError("macro letter out of range");
      pending.push_back({{prev, next, e.in[j], e.out[j]},
                         {static_cast<std::uint32_t>(ei), static_cast<std::uint32_t>(j)}});
      prev = next;
    }
  }
  std::sort(pending.begin(), pending.end(),
            [](const Pending& a, const Pending& b) { return a.tile < b.tile; });
  for (std::size_t i = 1; i < pending.size(); ++i)
    if (pending[i].tile == pending[i - 1].tile)
      throw WangError("macro expansion produced a duplicate transition");
  std::vector<Tile> tiles;
  ExpandedMacro out;
  for (const auto& p : pending) {
    tiles.push_back(p.tile);
    out.tags.push_back(p.tag);
  }
  const std::size_t h = names.size();
  out.transducer = Transducer(h, m.v_count, std::move(tiles), std::move(names));
  out.macro_state = std::move(macro_state);
  return out;
}

MacroTransducer compress_paths(const Transducer& t, const std::vector<ColorId>& keep) {
  MacroTransducer m;
  m.v_count = t.v_count();
  std::vector<char> kept(t.h_count(), 0);
  for (ColorId q : keep) {
    kept[q] = 1;
    m.states.push_back(t.name(q));
  }
  ReverseIndex rev(t);
  for (ColorId q = 0; q < t.h_count(); ++q) {
    if (kept[q]) continue;
    if (t.outgoing(q).size() + rev.incoming(q).size() == 0) continue;
    if (t.outgoing(q).size() != 1 || rev.incoming(q).size() != 1)
      throw WangError("state " + t.name(q) + " is not on a simple chain");
  }
  for (ColorId q : keep) {
    for (const Tile& first : t.outgoing(q)) {
      MacroEdge e;
      e.from = t.name(q);
      const Tile* cur = &first;
      std::size_t steps = 0;
      while (true) {
        e.in.push_back(cur->s);
        e.out.push_back(cur->n);
        if (kept[cur->e]) break;
        if (++steps > t.size()) throw WangError("chain without a kept state");
        cur = &t.outgoing(cur->e)[0];
      }
      e.to = t.name(cur->e);
      m.edges.push_back(std::move(e));
    }
  }
  return m;
}

const char* const kFamilyLabels[6] = {"alpha", "beta", "gamma", "delta", "epsilon", "omega"};

MacroTransducer family_macro(unsigned n) {
  auto g = [&](unsigned i) { return static_cast<std::size_t>(fib_g(i)); };
  auto run = [](ColorId c, std::size_t r) { return Word(r, c); };
  auto lit = [](const char* bits) {
    Word w;
    for (const char* p = bits; *p; ++p) w.push_back(static_cast<ColorId>(*p - '0'));
    return w;
  };
  auto cat = [](std::initializer_list<Word> parts) {
    Word w;
    for (const Word& p : parts) w.insert(w.end(), p.begin(), p.end());
    return w;
  };
  const std::size_t g1 = g(n + 1), g2 = g(n + 2), g3 = g(n + 3);

  MacroTransducer m;
  m.v_count = 2;
  m.states = {"A", "F"};
  auto add = [&](const char* from, const char* to, Word in, Word out, int label) {
    m.edges.push_back({from, to, std::move(in), std::move(out), kFamilyLabels[label]});
  };
  if (n % 2 == 0) {
    add("A", "F", run(0, g2 - 3), run(1, g2 - 3), 0);
    add("F", "A", run(0, g1 + 3), cat({lit("100"), run(1, g1)}), 1);
    add("F", "A", run(0, g3 + 3), cat({run(1, g2), lit("000"), run(1, g1)}), 2);
    add("F", "A", cat({run(0, g1), lit("111"), run(0, g2)}), run(1, g3 + 3), 3);
    add("F", "A", cat({run(0, g1), lit("110")}), run(1, g1 + 3), 4);
    add("F", "A", cat({run(0, g3), lit("110"), run(0, g1)}),
        cat({run(1, g1), lit("100"), run(1, g3)}), 5);
  } else {
    add("A", "F", run(1, g2 - 3), run(0, g2 - 3), 0);
    add("F", "A", run(1, g1 + 3), cat({lit("110"), run(0, g1)}), 1);
    add("F", "A", run(1, g3 + 3), cat({run(0, g2), lit("111"), run(0, g1)}), 2);
    add("F", "A", cat({run(1, g1), lit("000"), run(1, g2)}), run(0, g3 + 3), 3);
    add("F", "A", cat({run(1, g1), lit("100")}), run(0, g1 + 3), 4);
    add("F", "A", cat({run(1, g3), lit("100"), run(1, g1)}),
        cat({run(0, g1), lit("110"), run(0, g3)}), 5);
  }
  return m;
}

ExpandedMacro expand_family(unsigned n, const Budget& budget) {
  std::uint64_t total = 0;
  for (unsigned i = 1; i <= 3; ++i) total += fib_g(n + i);
  if (n > 80 || 4 * total > budget.max_transitions)
    throw BudgetExceeded("family expansion exceeds the budget", 0);
  return expand_macro(family_macro(n), budget);
}

}  // namespace wangforge
