#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <limits>

#include "plasmonqd/entanglement.hpp"
#include "plasmonqd/errors.hpp"
#include "plasmonqd/lindblad.hpp"
#include "plasmonqd/model.hpp"
#include "plasmonqd/oracle.hpp"
#include "plasmonqd/spectra.hpp"
#include "plasmonqd/storage.hpp"

namespace py = pybind11;
using namespace plasmonqd;

namespace {

ModelParams make_params(double kd, double delta, double gamma0, double gamma_nr, bool superradiance,
                        std::optional<double> k0d) {
    ModelParams p;
    p.kd = kd;
    p.delta = delta;
    p.gamma0 = gamma0;
    p.gamma_nr = gamma_nr;
    p.include_superradiance = superradiance;
    p.k0d = k0d.value_or(kd);
    return p;
}

py::array_t<double> column(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }
py::array_t<cplx> ccolumn(const std::vector<cplx>& v) { return py::array_t<cplx>(v.size(), v.data()); }

py::dict spectrum_dict(const std::vector<SpectrumRow>& rows) {
    std::vector<double> d, T, R, L;
    for (const auto& r : rows) {
        d.push_back(r.delta);
        T.push_back(r.T);
        R.push_back(r.R);
        L.push_back(r.Loss);
    }
    py::dict out;
    out["delta"] = column(d);
    out["T"] = column(T);
    out["R"] = column(R);
    out["Loss"] = column(L);
    return out;
}

}  // namespace

PYBIND11_MODULE(_plasmonqd, m) {
    m.attr("__version__") = PLASMONQD_VERSION;
    m.attr("pi") = pi;

    // exception classes mirror the C++ ones; the category tells the CLI exit code
    static py::exception<Error> base(m, "Error");
    static py::exception<Error> config(m, "ConfigError", base.ptr());
    static py::exception<Error> contract(m, "ContractViolation", base.ptr());
    static py::exception<Error> numerical(m, "NumericalError", base.ptr());
#define PQ_EXC(Name, Parent) static py::exception<Name> exc_##Name(m, #Name, Parent.ptr())
    PQ_EXC(InvalidParams, config);
    PQ_EXC(TangentPole, config);
    PQ_EXC(GridTooCoarse, config);
    PQ_EXC(StepTooLarge, config);
    PQ_EXC(BandwidthTooWide, config);
    PQ_EXC(SingularSystem, numerical);
    PQ_EXC(NoPeakInBracket, numerical);
    PQ_EXC(NoMinimumInBracket, numerical);
    PQ_EXC(EmptyProjection, numerical);
    PQ_EXC(NotConverged, numerical);
    PQ_EXC(PopulationUnderflow, numerical);
#undef PQ_EXC
    py::register_exception_translator([](std::exception_ptr p) {
        if (!p) return;
        try {
            std::rethrow_exception(p);
        }
#define PQ_CATCH(Name) \
    catch (const Name& e) { PyErr_SetString(exc_##Name.ptr(), e.what()); }
        PQ_CATCH(InvalidParams)
        PQ_CATCH(TangentPole)
        PQ_CATCH(GridTooCoarse)
        PQ_CATCH(StepTooLarge)
        PQ_CATCH(BandwidthTooWide)
        PQ_CATCH(SingularSystem)
        PQ_CATCH(NoPeakInBracket)
        PQ_CATCH(NoMinimumInBracket)
        PQ_CATCH(EmptyProjection)
        PQ_CATCH(NotConverged)
        PQ_CATCH(PopulationUnderflow)
#undef PQ_CATCH
        catch (const ContractViolation& e) {
            PyErr_SetString(contract.ptr(), e.what());
        } catch (const Error& e) {
            PyErr_SetString(base.ptr(), e.what());
        }
    });

    py::class_<ScatteringSolution>(m, "ScatteringSolution")
        .def_readonly("t", &ScatteringSolution::t)
        .def_readonly("r", &ScatteringSolution::r)
        .def_readonly("a", &ScatteringSolution::a)
        .def_readonly("b", &ScatteringSolution::b)
        .def_readonly("xi1", &ScatteringSolution::xi1)
        .def_readonly("xi2", &ScatteringSolution::xi2)
        .def_readonly("T", &ScatteringSolution::T)
        .def_readonly("R", &ScatteringSolution::R)
        .def_readonly("Loss", &ScatteringSolution::Loss)
        .def_readonly("residual", &ScatteringSolution::residual)
        .def("__repr__", [](const ScatteringSolution& s) {
            return "ScatteringSolution(T=" + std::to_string(s.T) + ", R=" + std::to_string(s.R) +
                   ", Loss=" + std::to_string(s.Loss) + ")";
        });

    m.def(
        "solve_two_dot",
        [](double kd, double delta, double g0, double gnr, bool sr, std::optional<double> k0d) {
            return solve_two_dot(make_params(kd, delta, g0, gnr, sr, k0d));
        },
        py::arg("kd"), py::arg("delta"), py::arg("gamma0") = 0.0, py::arg("gamma_nr") = 0.0,
        py::arg("superradiance") = false, py::arg("k0d") = py::none());
    m.def("solve_single_dot", &solve_single_dot, py::arg("gamma_prime"), py::arg("delta"),
          py::arg("plasmon_width") = 1.0);

    m.def(
        "sweep_detuning",
        [](double kd, double g0, double gnr, bool sr, std::optional<double> k0d, double lo, double hi, std::size_t n,
           unsigned threads) {
            return spectrum_dict(sweep_detuning(make_params(kd, 0.0, g0, gnr, sr, k0d), lo, hi, n, threads));
        },
        py::arg("kd"), py::arg("gamma0") = 0.0, py::arg("gamma_nr") = 0.0, py::arg("superradiance") = false,
        py::arg("k0d") = py::none(), py::arg("delta_min") = -3.0, py::arg("delta_max") = 3.0,
        py::arg("points") = 601, py::arg("threads") = 1);
    m.def(
        "sweep_single_dot",
        [](double gp, double lo, double hi, std::size_t n) { return spectrum_dict(sweep_single_dot(gp, lo, hi, n)); },
        py::arg("gamma_prime"), py::arg("delta_min") = -3.0, py::arg("delta_max") = 3.0, py::arg("points") = 601);

    py::class_<PeakRecord>(m, "PeakRecord")
        .def_readonly("kd", &PeakRecord::kd)
        .def_readonly("delta_peak", &PeakRecord::delta_peak)
        .def_readonly("R_peak", &PeakRecord::R_peak)
        .def_readonly("with_sr", &PeakRecord::with_sr);
    py::class_<ReflectionMinimum>(m, "ReflectionMinimum")
        .def_readonly("delta_min", &ReflectionMinimum::delta_min)
        .def_readonly("R_min", &ReflectionMinimum::R_min)
        .def_readonly("tan2_residual", &ReflectionMinimum::tan2_residual);

    m.def(
        "reflection_peak",
        [](double kd, double g0, double gnr, bool sr, std::optional<double> k0d, double lo, double hi) {
            return reflection_peak(make_params(kd, 0.0, g0, gnr, sr, k0d), Bracket{lo, hi});
        },
        py::arg("kd"), py::arg("gamma0") = 0.0, py::arg("gamma_nr") = 0.0, py::arg("superradiance") = false,
        py::arg("k0d") = py::none(), py::arg("delta_min") = -3.0, py::arg("delta_max") = 3.0);
    m.def(
        "reflection_minimum",
        [](double kd, double g0, double gnr, double lo, double hi) {
            return reflection_minimum(make_params(kd, 0.0, g0, gnr, false, {}), Bracket{lo, hi});
        },
        py::arg("kd"), py::arg("gamma0") = 0.0, py::arg("gamma_nr") = 0.0, py::arg("delta_min") = -3.0,
        py::arg("delta_max") = 3.0);

    py::class_<ProjectedState>(m, "ProjectedState")
        .def_readonly("xi1", &ProjectedState::xi1)
        .def_readonly("xi2", &ProjectedState::xi2)
        .def_readonly("concurrence", &ProjectedState::concurrence)
        .def_readonly("theta", &ProjectedState::theta);
    m.def("concurrence", &concurrence, py::arg("xi1"), py::arg("xi2"));
    m.def("project_state", py::overload_cast<const ScatteringSolution&>(&project_state), py::arg("solution"));
    m.def("high_c_curve", &high_c_curve, py::arg("kd"), py::arg("gamma_prime") = 0.0);

    m.def(
        "concurrence_map",
        [](const std::vector<double>& kds, const std::vector<double>& ds, double g0, double gnr, unsigned threads) {
            const auto map = concurrence_map(kds, ds, make_params(0.0, 0.0, g0, gnr, false, {}), threads);
            py::array_t<double> C({kds.size(), ds.size()});
            auto c = C.mutable_unchecked<2>();
            for (std::size_t i = 0; i < kds.size(); ++i)
                for (std::size_t j = 0; j < ds.size(); ++j) {
                    const auto& cell = map.cells[i * ds.size() + j];
                    c(i, j) = cell.C ? *cell.C : std::numeric_limits<double>::quiet_NaN();
                }
            return py::make_tuple(C, map.warnings);
        },
        py::arg("kd_values"), py::arg("delta_values"), py::arg("gamma0") = 0.0, py::arg("gamma_nr") = 0.0,
        py::arg("threads") = 1, "Concurrence on the kd x delta grid (NaN where undefined) and the warnings.");

    m.def(
        "phase_scan",
        [](const std::vector<double>& ds, const std::vector<double>& gps, double centre) {
            std::vector<double> d, g, th, kd;
            std::vector<bool> lim;
            for (const auto& r : phase_scan(ds, gps, KdPolicy{centre})) {
                d.push_back(r.delta);
                g.push_back(r.gamma_prime);
                th.push_back(r.theta);
                kd.push_back(r.kd);
                lim.push_back(r.limit);
            }
            py::dict out;
            out["delta"] = column(d);
            out["gamma_prime"] = column(g);
            out["theta"] = column(th);
            out["kd"] = column(kd);
            out["limit"] = lim;
            return out;
        },
        py::arg("delta_values"), py::arg("gamma_prime_values"), py::arg("kd_centre") = 2.0 * pi);

    py::class_<CollectiveRates>(m, "CollectiveRates")
        .def_readonly("plus", &CollectiveRates::plus)
        .def_readonly("minus", &CollectiveRates::minus);
    m.def("gamma_pm", &gamma_pm, py::arg("k0d"), py::arg("gamma0"));
    m.def("effective_hamiltonian_sr", &effective_hamiltonian_sr, py::arg("k0d"), py::arg("gamma0"));
    m.def("lindblad_rhs", &lindblad_rhs, py::arg("rho"), py::arg("k0d"), py::arg("gamma0"),
          py::arg("with_jumps") = true);
    m.def(
        "no_jump_trace_distance",
        [](double k0d, double g0, const TwoDotState& psi, double tf) {
            return no_jump_equivalence(k0d, g0, psi, tf).max_trace_distance;
        },
        py::arg("k0d"), py::arg("gamma0"), py::arg("psi0"), py::arg("t_final"));

    py::class_<OracleComparison>(m, "OracleComparison")
        .def_readonly("solver", &OracleComparison::solver)
        .def_property_readonly("t_num", [](const OracleComparison& c) { return c.oracle.t_num; })
        .def_property_readonly("r_num", [](const OracleComparison& c) { return c.oracle.r_num; })
        .def_readonly("err_t", &OracleComparison::err_t)
        .def_readonly("err_r", &OracleComparison::err_r)
        .def_readonly("norm_final", &OracleComparison::norm_final)
        .def_readonly("modes", &OracleComparison::modes)
        .def_readonly("steps", &OracleComparison::steps);
    m.def(
        "run_oracle",
        [](double kd, double delta, double g0, double gnr, double sigma_k) {
            OracleSettings s;
            s.sigma_k = sigma_k;
            return run_oracle(make_params(kd, delta, g0, gnr, false, {}), s);
        },
        py::arg("kd"), py::arg("delta"), py::arg("gamma0") = 0.0, py::arg("gamma_nr") = 0.0,
        py::arg("sigma_k") = 0.02, py::call_guard<py::gil_scoped_release>());

    m.def(
        "run_matched_storage",
        [](double P, double sigma, bool odd) {
            StorageParams sp;
            sp.P = P;
            sp.sigma = sigma;
            sp.parity = odd ? Parity::odd : Parity::even;
            MatchedStorage ms;
            {
                py::gil_scoped_release nogil;
                ms = run_matched_storage(sp);
            }
            py::dict out;
            out["efficiency"] = ms.run.efficiency;
            out["outgoing_norm"] = ms.run.outgoing_norm;
            out["identity_residual"] = ms.identity_residual;
            out["times"] = column(ms.run.times);
            out["c_m"] = ccolumn(ms.run.c_m);
            out["omega"] = ccolumn(ms.pulse.omega);
            out["input"] = ccolumn(ms.input.a);
            return out;
        },
        py::arg("P"), py::arg("sigma") = 0.05, py::arg("odd") = false);
}
