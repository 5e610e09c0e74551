#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "exwave/calculus.hpp"
#include "exwave/ftm.hpp"
#include "exwave/nlw.hpp"
#include "exwave/profiles.hpp"
#include "exwave/propagator.hpp"
#include "exwave/runner.hpp"
#include "exwave/transform.hpp"

namespace py = pybind11;
using namespace exwave;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<double> to_vector(const Array& a, std::size_t expected, const char* what) {
    if (a.ndim() != 1 || static_cast<std::size_t>(a.size()) != expected)
        throw std::invalid_argument(std::string(what) + ": expected a 1-D array of length " + std::to_string(expected));
    return {a.data(), a.data() + a.size()};
}

RadialField field(const RadialGrid& g, const Array& a, const char* what = "field") {
    return RadialField(g, to_vector(a, g.interior(), what));
}

template <class Span>
Array to_array(const Span& s) {
    return Array(static_cast<py::ssize_t>(s.size()), s.data());
}

py::array_t<std::complex<double>> to_complex(const ComplexRadialField& f) {
    std::vector<std::complex<double>> z(f.re.size());
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = {f.re[i], f.im[i]};
    return py::array_t<std::complex<double>>(static_cast<py::ssize_t>(z.size()), z.data());
}

BlockKind block_kind(const std::string& kind) {
    static const std::map<std::string, BlockKind> kinds{
        {"leq", BlockKind::leq}, {"at", BlockKind::at}, {"tilde", BlockKind::tilde}, {"gt", BlockKind::gt}};
    const auto it = kinds.find(kind);
    if (it == kinds.end()) throw std::invalid_argument("block kind must be one of leq, at, tilde, gt");
    return it->second;
}

py::dict trajectory_dict(const Trajectory& tr) {
    const std::size_t m = tr.size(), k = m ? tr.front().u.size() : 0;
    std::vector<double> uv(m * k), utv(m * k);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            uv[i * k + j] = tr[i].u[j];
            utv[i * k + j] = tr[i].ut[j];
        }
    const std::vector<py::ssize_t> shape{static_cast<py::ssize_t>(m), static_cast<py::ssize_t>(k)};
    py::array_t<double> u(shape, uv.data()), ut(shape, utv.data());
    py::dict d;
    d["t"] = to_array(tr.times());
    d["u"] = u;
    d["ut"] = ut;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Radial wave equations outside the unit ball: transform, propagators and cubic NLW.";

    py::register_exception<TruncationError>(m, "TruncationError", PyExc_ValueError);
    py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);
    py::register_exception<runner::ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::class_<RadialGrid>(m, "Grid")
        .def(py::init<double, std::size_t>(), py::arg("length"), py::arg("intervals"))
        .def_property_readonly("length", &RadialGrid::length)
        .def_property_readonly("intervals", &RadialGrid::intervals)
        .def_property_readonly("size", &RadialGrid::interior)
        .def_property_readonly("spacing", &RadialGrid::spacing)
        .def_property_readonly("radii",
                               [](const RadialGrid& g) {
                                   std::vector<double> v(g.interior());
                                   for (std::size_t i = 0; i < v.size(); ++i) v[i] = g.sample_radius(i);
                                   return to_array(v);
                               })
        .def_property_readonly("frequencies",
                               [](const RadialGrid& g) {
                                   std::vector<double> v(g.interior());
                                   for (std::size_t i = 0; i < v.size(); ++i) v[i] = g.frequency(i);
                                   return to_array(v);
                               })
        .def("__repr__", [](const RadialGrid& g) {
            return "Grid(length=" + py::repr(py::float_(g.length())).cast<std::string>() +
                   ", intervals=" + std::to_string(g.intervals()) + ")";
        });

    m.def("forward", [](const RadialGrid& g, const Array& f) { return to_array(forward(field(g, f)).coeffs()); },
          py::arg("grid"), py::arg("f"), "Distorted Fourier coefficients at grid.frequencies.");
    m.def("inverse",
          [](const RadialGrid& g, const Array& F) {
              return to_array(inverse(SpectralField(g, to_vector(F, g.interior(), "coefficients"))).values());
          },
          py::arg("grid"), py::arg("coeffs"));
    m.def("lq_norm", [](const RadialGrid& g, const Array& f, double q) { return lq_norm(field(g, f), q); },
          py::arg("grid"), py::arg("f"), py::arg("q"));
    m.def("lp_project",
          [](const RadialGrid& g, const Array& f, double N, const std::string& kind) {
              return to_array(lp_project(field(g, f), DyadicBlock{Dyadic::from_value(N), block_kind(kind)}).values());
          },
          py::arg("grid"), py::arg("f"), py::arg("N"), py::arg("kind") = "at",
          "Littlewood-Paley projection; kind is one of leq, at, tilde, gt.");
    m.def("sobolev_norm", [](const RadialGrid& g, const Array& f, double s) { return sobolev_norm(field(g, f), s); },
          py::arg("grid"), py::arg("f"), py::arg("s"));

    m.def("half_wave", [](const RadialGrid& g, const Array& f, double t) { return to_complex(half_wave(field(g, f), t)); },
          py::arg("grid"), py::arg("f"), py::arg("t"));
    m.def("wave_propagate",
          [](const RadialGrid& g, const Array& u0, const Array& u1, double t) {
              const WaveState s = wave_propagate(field(g, u0, "u0"), field(g, u1, "u1"), t);
              return py::make_tuple(to_array(s.u.values()), to_array(s.ut.values()));
          },
          py::arg("grid"), py::arg("u0"), py::arg("u1"), py::arg("t"));
    m.def("energy",
          [](const RadialGrid& g, const Array& u, const Array& ut) {
              return energy(WaveState(0.0, field(g, u, "u"), field(g, ut, "ut")));
          },
          py::arg("grid"), py::arg("u"), py::arg("ut"));
    m.def("kernel",
          [](double N, double t, double r, double s, double rel_tol) {
              return kernel_KN(Dyadic::from_value(N), t, r, s, QuadratureOptions{rel_tol, 20});
          },
          py::arg("N"), py::arg("t"), py::arg("r"), py::arg("s"), py::arg("rel_tol") = 1e-10);
    m.def("wholespace_kernel",
          [](double t, double r, double s, double rel_tol) {
              return wholespace_kernel(t, r, s, QuadratureOptions{rel_tol, 20});
          },
          py::arg("t"), py::arg("r"), py::arg("s"), py::arg("rel_tol") = 1e-10);

    m.def("dipole_block",
          [](const RadialGrid& g, double N, double rho0) { return to_array(dipole_block(g, Dyadic::from_value(N), rho0).values()); },
          py::arg("grid"), py::arg("N"), py::arg("rho0") = 0.0);
    m.def("gaussian_bump",
          [](const RadialGrid& g, double a, double c, double w) { return to_array(profiles::gaussian_bump(g, a, c, w).values()); },
          py::arg("grid"), py::arg("amplitude") = 1.0, py::arg("center") = 3.0, py::arg("width") = 0.5);
    m.def("rough_profile",
          [](const RadialGrid& g, double a, double s, double delta, double c, double hw) {
              return to_array(profiles::rough_profile(g, a, s, delta, c, hw, profiles::cubic_safe_band(g)).values());
          },
          py::arg("grid"), py::arg("amplitude") = 1.0, py::arg("s") = 0.875, py::arg("delta") = 0.01,
          py::arg("center") = 4.0, py::arg("halfwidth") = 3.0);

    m.def("dispersive_probe",
          [](const RadialGrid& g, double N, const Array& f, const std::vector<double>& times) {
              const DispersiveResult r = dispersive_probe(Dyadic::from_value(N), field(g, f), times);
              std::vector<double> sup;
              for (const auto& s : r.samples) sup.push_back(s.sup_norm);
              py::dict d;
              d["t"] = times;
              d["sup_norm"] = sup;
              d["slope"] = r.fit.exponent;
              d["constant"] = r.fit.constant;
              d["residual"] = r.fit.residual;
              return d;
          },
          py::arg("grid"), py::arg("N"), py::arg("f"), py::arg("times"));

    m.def("solve",
          [](const RadialGrid& g, const Array& u0, const Array& u1, double dt, double T, int sample_every,
             bool nonlinear) {
              SolverConfig c;
              c.dt = dt;
              c.T = T;
              c.sample_every = sample_every;
              c.nonlinearity_on = nonlinear;
              std::vector<std::string> warnings;
              c.warn = [&](const std::string& w) { warnings.push_back(w); };
              py::dict d = trajectory_dict(solve(field(g, u0, "u0"), field(g, u1, "u1"), c));
              d["warnings"] = warnings;
              return d;
          },
          py::arg("grid"), py::arg("u0"), py::arg("u1"), py::arg("dt") = 1e-3, py::arg("T") = 1.0,
          py::arg("sample_every") = 1, py::arg("nonlinear") = true,
          "Cubic defocusing NLW by Strang splitting; returns t, u and ut stacked by sample.");

    m.def("run_ftm",
          [](const RadialGrid& g, const Array& u0, const Array& u1, double s, int J, std::optional<double> T,
             double dt, int sample_every, bool track_direct) {
              FtmConfig c;
              c.s = s;
              c.J = J;
              c.T = T;
              c.dt = dt;
              c.sample_every = sample_every;
              c.track_direct = track_direct;
              const RadialField f0 = field(g, u0, "u0"), f1 = field(g, u1, "u1");
              c.support = data_support(f0, f1);
              const FtmReport r = run_ftm(c, {f0, f1});
              py::dict d;
              d["T"] = r.T;
              d["steps"] = r.steps;
              d["smallness_holds"] = r.smallness_holds;
              d["w_l4_tx"] = r.w_norms.l4_tx;
              d["w_linf_l3"] = r.w_norms.linf_l3;
              d["w_l2_l6"] = r.w_norms.l2_l6;
              d["w_linf_hs"] = r.w_norms.linf_hs;
              d["w_data_hs"] = r.w_norms.data_hs;
              d["t"] = r.energy.times;
              d["energy"] = r.energy.energy;
              d["flux"] = r.energy.flux;
              d["E0"] = r.energy.E0;
              d["E_T"] = r.energy.E_T;
              d["flux_residual"] = r.energy.flux_residual;
              d["flux_tolerance"] = r.energy.flux_tolerance;
              d["bound_ratio"] = r.energy.bound_ratio;
              d["sup_hs"] = r.hs.sup_hs;
              d["recombine_error"] = r.recombine_error;
              d["warnings"] = r.warnings;
              return d;
          },
          py::arg("grid"), py::arg("u0"), py::arg("u1"), py::arg("s") = 0.875, py::arg("J") = 5,
          py::arg("T") = py::none(), py::arg("dt") = 1.0 / 1024.0, py::arg("sample_every") = 16,
          py::arg("track_direct") = false,
          "Split at 2^J and evolve the high part w and the low part v; the horizon defaults to 2^{2J(2s-3/2)}.");

    m.def("run_experiment",
          [](const std::string& sub, const std::string& config, std::optional<int> threads) {
              runner::RunResult r;
              {
                  py::gil_scoped_release release;
                  r = runner::execute(sub, config, threads);
              }
              py::dict tables;
              for (const auto& t : r.tables) tables[py::str(t.name)] = t.to_csv();
              return py::make_tuple(r.manifest, tables);
          },
          py::arg("subcommand"), py::arg("config") = "{}", py::arg("threads") = py::none(),
          "Runs a CLI subcommand from JSON config text; returns (manifest JSON, {table: CSV text}).");
    m.attr("subcommands") = runner::subcommands();
}
