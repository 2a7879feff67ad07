#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wangforge/algebra.hpp"
#include "wangforge/macro.hpp"
#include "wangforge/paper.hpp"
#include "wangforge/search.hpp"
#include "wangforge/text_format.hpp"
#include "wangforge/tiler.hpp"

namespace py = pybind11;
using namespace wangforge;

namespace {

using TileTuple = std::tuple<ColorId, ColorId, ColorId, ColorId>;

Transducer make_transducer(std::size_t h, std::size_t v, const std::vector<TileTuple>& tiles,
                           std::vector<std::string> names) {
  std::vector<Tile> out;
  for (auto [w, e, s, n] : tiles) out.push_back({w, e, s, n});
  return Transducer(h, v, std::move(out), std::move(names));
}

std::vector<TileTuple> tile_tuples(const Transducer& t) {
  std::vector<TileTuple> out;
  for (const Tile& x : t.tiles()) out.emplace_back(x.w, x.e, x.s, x.n);
  return out;
}

Budget make_budget(std::size_t max_states, std::size_t max_transitions, double timeout) {
  Budget b;
  b.max_states = max_states;
  b.max_transitions = max_transitions;
  b.wall_time = timeout <= 0 ? std::chrono::milliseconds::max()
                             : std::chrono::milliseconds(static_cast<long long>(timeout * 1000));
  return b;
}

py::dict verdict_dict(const Verdict& v) {
  py::dict d;
  d["kind"] = to_string(v.kind);
  d["k"] = v.k;
  d["p"] = v.p;
  d["peak_states"] = v.peak_states;
  d["peak_transitions"] = v.peak_transitions;
  if (v.torus) d["torus"] = v.torus->cells;
  return d;
}

py::object grid_rows(const std::optional<TilingGrid>& g) {
  if (!g) return py::none();
  py::list rows;
  for (std::size_t y = 0; y < g->height; ++y) {
    py::list row;
    for (std::size_t x = 0; x < g->width; ++x) row.append(g->at(x, y));
    rows.append(row);
  }
  return rows;
}

TilingGrid grid_from_rows(const std::vector<std::vector<std::uint32_t>>& rows) {
  TilingGrid g;
  g.height = rows.size();
  g.width = rows.empty() ? 0 : rows.front().size();
  for (const auto& r : rows) {
    if (r.size() != g.width) throw WangError("rows of different widths");
    g.cells.insert(g.cells.end(), r.begin(), r.end());
  }
  return g;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Wang tiles as transducers: algebra, searches and published tile sets.";

  py::register_exception<WangError>(m, "WangError");

  py::class_<Transducer>(m, "Transducer")
      .def(py::init(&make_transducer), py::arg("hcolors"), py::arg("vcolors"), py::arg("tiles"),
           py::arg("names") = std::vector<std::string>{},
           "Tiles are (west, east, south, north) tuples.")
      .def_property_readonly("hcolors", &Transducer::h_count)
      .def_property_readonly("vcolors", &Transducer::v_count)
      .def_property_readonly("tiles", &tile_tuples)
      .def_property_readonly("names", &Transducer::names)
      .def("active_states", &Transducer::active_state_count)
      .def("__len__", &Transducer::size)
      .def("__eq__", [](const Transducer& a, const Transducer& b) { return a == b; })
      .def("__repr__", [](const Transducer& t) {
        return "<Transducer " + std::to_string(t.h_count()) + " states, " +
               std::to_string(t.size()) + " tiles>";
      });

  m.def("read_wang", &read_wang, py::arg("text"));
  m.def("write_wang", &write_wang, py::arg("t"));

  m.def("compose", [](const Transducer& a, const Transducer& b) { return compose(a, b); },
        "Stacks a below b.");
  m.def("rotate", &rotate);
  m.def("reverse", &reverse);
  m.def("union", &disjoint_union);
  m.def("trim", &trim);
  m.def("prune", &prune_io_alphabet);
  m.def("drop_inter_scc", &drop_inter_scc);
  m.def("minimize", &minimize_bisim);
  m.def(
      "power",
      [](const Transducer& t, std::size_t k, const std::string& strategy) {
        return power(t, k, parse_strategy(strategy));
      },
      py::arg("t"), py::arg("k"), py::arg("strategy") = "trim_and_minimize");
  m.def("is_empty", &is_empty);
  m.def(
      "periodic_point",
      [](const Transducer& t) -> py::object {
        auto w = has_periodic_point(t);
        if (!w) return py::none();
        std::vector<TileTuple> cycle;
        for (const Tile& x : w->cycle) cycle.emplace_back(x.w, x.e, x.s, x.n);
        return py::make_tuple(w->period, cycle);
      },
      "(period, cycle of tiles) of a run w -> w, or None.");
  m.def("isomorphic", [](const Transducer& a, const Transducer& b) {
    return isomorphic(a, b).has_value();
  });

  m.def("canonical_key", &canonical_key, py::arg("t"), py::arg("symmetries") = false);
  m.def("enumerate_graphs", [](std::size_t n_edges) {
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> out;
    for (auto& g : enumerate_graphs(n_edges)) out.push_back(g.edges);
    return out;
  });
  m.def(
      "test_aperiodicity",
      [](const Transducer& t, std::size_t max_k, std::size_t max_period, double timeout) {
        AperiodicityOptions o;
        o.budget = make_budget(Budget{}.max_states, Budget{}.max_transitions, timeout);
        o.budget.max_k = max_k;
        o.max_period = max_period;
        py::gil_scoped_release release;
        Verdict v = test_aperiodicity(t, o);
        py::gil_scoped_acquire acquire;
        return verdict_dict(v);
      },
      py::arg("t"), py::arg("max_k") = 12, py::arg("max_period") = 64, py::arg("timeout") = 60.0);
  m.def(
      "seeded_row_analysis",
      [](const Transducer& t, ColorId seed, std::size_t max_k, const std::string& direction,
         double timeout) {
        Budget b = make_budget(Budget::unlimited().max_states,
                               Budget::unlimited().max_transitions, timeout);
        SeededReport r;
        {
          py::gil_scoped_release release;
          r = seeded_row_analysis(t, seed, max_k, parse_direction(direction), b);
        }
        py::dict d;
        d["first_empty_k"] = r.first_empty_k ? py::cast(*r.first_empty_k) : py::none();
        d["longest_seed_path"] =
            r.longest_seed_path ? py::cast(*r.longest_seed_path) : py::none();
        d["k_reached"] = r.k_reached;
        d["budget_exhausted"] = r.budget_exhausted;
        std::vector<std::size_t> sizes;
        for (const auto& s : r.reduced_steps) sizes.push_back(s.transitions);
        d["reduced_sizes"] = sizes;
        return d;
      },
      py::arg("t"), py::arg("seed"), py::arg("max_k") = 12, py::arg("direction") = "reverse",
      py::arg("timeout") = 60.0);

  m.def(
      "tile_rectangle",
      [](const Transducer& t, std::size_t width, std::size_t height) {
        return grid_rows(tile_rectangle(t, width, height).grid);
      },
      "Rows of tile indices, bottom row first, or None.");
  m.def(
      "grid_violation",
      [](const Transducer& t, const std::vector<std::vector<std::uint32_t>>& rows) {
        return grid_violation(t.tiles(), grid_from_rows(rows));
      });
  m.def(
      "render_svg",
      [](const Transducer& t, const std::vector<std::vector<std::uint32_t>>& rows,
         std::size_t cell) { return render_svg(t.tiles(), grid_from_rows(rows), cell); },
      py::arg("t"), py::arg("rows"), py::arg("cell") = 40);

  m.def("fib_g", &fib_g);
  m.def("singular_word", &singular_word);
  m.def("fibonacci_factors", &fibonacci_factors);
  m.def("expand_family", [](unsigned n) { return expand_family(n).transducer; });

  m.def("tileset_names", [] {
    return std::vector<std::string>(std::begin(kTilesetNames), std::end(kTilesetNames));
  });
  m.def(
      "named_tileset",
      [](const std::string& name) {
        NamedTileset s = named_tileset(name);
        return py::make_tuple(s.tiles, s.components);
      },
      "(tiles, components) of a published set.");
  m.def("tileset_checksum", &tileset_checksum);
  m.def(
      "run_suite",
      [](const std::string& suite, unsigned n_max) {
        std::vector<FactReport> reports;
        {
          py::gil_scoped_release release;
          reports = run_suite(suite, n_max);
        }
        py::list out;
        for (const auto& r : reports) {
          py::dict d;
          d["id"] = r.id;
          d["pass"] = r.pass;
          d["details"] = r.details;
          d["elapsed_ms"] = r.elapsed_ms;
          out.append(d);
        }
        return out;
      },
      py::arg("suite") = "all", py::arg("n_max") = 2);
}
