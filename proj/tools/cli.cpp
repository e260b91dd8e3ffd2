#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include "urt/container.hpp"
#include "urt/fourier_slice.hpp"
#include "urt/holonomy.hpp"
#include "urt/hybrid.hpp"
#include "urt/inversion.hpp"
#include "urt/parallel.hpp"
#include "urt/phantom.hpp"
#include "urt/radon.hpp"

namespace urt::cli {

namespace {

constexpr const char* version = "urt 1.0.0";
constexpr double two_pi = 2.0 * std::numbers::pi;

class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

std::pair<double, double> parse_pair(const std::string& text, const char* flag) {
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw ArgumentError(std::string(flag) + " expects a:b");
    try {
        std::size_t used_a = 0, used_b = 0;
        const auto a_text = text.substr(0, colon);
        const auto b_text = text.substr(colon + 1);
        const double a = std::stod(a_text, &used_a);
        const double b = std::stod(b_text, &used_b);
        if (used_a != a_text.size() || used_b != b_text.size())
            throw std::invalid_argument(text);
        return {a, b};
    } catch (const std::logic_error&) {
        throw ArgumentError(std::string(flag) + " expects two numbers a:b, got '" + text + "'");
    }
}

/// Accumulates the reproducibility manifest of one run.
struct Manifest {
    std::vector<std::string> args;
    std::vector<std::string> outputs;

    void write(const std::string& path) const {
        std::ofstream out(path, std::ios::trunc);
        out << "version: " << version << '\n';
        out << "command:";
        for (const auto& a : args)
            out << ' ' << a;
        out << '\n';
        for (const auto& o : outputs)
            out << "output: " << o << " fnv1a64=" << file_checksum(o) << '\n';
    }
};

struct GeometryFlags {
    std::size_t nx = 256;
    std::size_t ny = 0;
    double extent = 8.0;
    std::string like;

    void attach(CLI::App* app) {
        app->add_option("--nx", nx, "grid samples along x")->check(CLI::Range(2, 1 << 16));
        app->add_option("--ny", ny, "grid samples along y (default: nx)");
        app->add_option("--extent", extent, "side length of the centered square grid")->check(CLI::PositiveNumber);
        app->add_option("--like", like, "copy the grid geometry from this URDN1 image");
    }

    [[nodiscard]] GridGeometry geometry() const {
        if (!like.empty())
            return read_image(like).geometry();
        GridGeometry g = GridGeometry::centered(nx, extent);
        if (ny != 0 && ny != nx) {
            g.ny = ny;
            g.dy = extent / static_cast<double>(ny - 1);
            g.validate();
        }
        return g;
    }
};

// Keeps the stored angles that fall inside [a, b).
Sinogram restrict_angles(const Sinogram& sino, double a, double b) {
    const auto& angles = sino.angles();
    const double tol = 1e-9 * angles.step();
    std::vector<std::size_t> keep;
    for (std::size_t m = 0; m < angles.n_phi; ++m) {
        const double phi = angles.angle(m);
        if (phi >= a - tol && phi < b - tol)
            keep.push_back(m);
    }
    if (keep.empty())
        throw ArgumentError("--range selects no stored angles");
    const double first = angles.angle(keep.front());
    AngularRange sub{first, first + static_cast<double>(keep.size()) * angles.step(), keep.size()};
    Sinogram out(sino.taus(), sub);
    for (std::size_t k = 0; k < keep.size(); ++k) {
        const auto src = sino.column(keep[k]);
        std::copy(src.begin(), src.end(), out.column(k).begin());
    }
    return out;
}

void write_csv(const std::string& path, const std::vector<std::pair<std::string, std::string>>& rows) {
    std::ofstream out(path, std::ios::trunc);
    out << "metric,value\n";
    for (const auto& [k, v] : rows)
        out << k << ',' << v << '\n';
}

std::string num(double v) {
    std::ostringstream s;
    s << std::setprecision(10) << v;
    return s.str();
}

struct Runner {
    Runner(std::ostream& stream, std::vector<std::string> args) : out(stream), manifest{std::move(args), {}} {}

    std::ostream& out;
    Manifest manifest;

    // phantom
    std::string scene_path, out_path, x3_spec;
    std::size_t slices = 0;
    GeometryFlags grid;

    // radon
    std::string in_path;
    double d_tau = 0.0;
    double ray_step = 0.0;
    std::size_t n_phi = 360;
    std::string range = "0:6.283185307179586";

    // fst-check
    std::string image_path, sino_path;
    std::size_t n_lambda = 33;
    double lambda_max = 0.0;
    double tolerance = 1e-3;

    // invert
    std::string backend = "ramp_filter";
    double epsilon = 0.0;
    double fa_step = 0.0;
    std::string reference, prefix;
    bool with_epsilon = false;
    bool range_given = false;

    // holonomy / defect
    std::string tau_spec = "0.2:3";
    std::size_t n_tau = 28;
    std::string phi_spec = "0:1.5707963267948966";
    std::size_t probe_phi = 16;
    double leak_tol = 0.0;

    // hybrid
    std::string volume_path;

    int phantom() {
        const auto scene = load_scene(scene_path);
        const auto g = grid.geometry();
        if (slices > 0) {
            if (x3_spec.empty())
                throw ArgumentError("--slices needs --x3 start:step");
            const auto [start, step] = parse_pair(x3_spec, "--x3");
            if (!(step > 0.0))
                throw ArgumentError("--x3 step must be positive");
            write_container(out_path, make_slices(scene, g, uniform_positions(start, step, slices)));
        } else {
            write_container(out_path, rasterize(flatten(scene), g));
        }
        manifest.outputs.push_back(out_path);
        out << "wrote " << out_path << '\n';
        return ok;
    }

    int radon() {
        const auto img = read_image(in_path);
        const auto [a, b] = parse_pair(range, "--range");
        AngularRange angles{a, b, n_phi};
        angles.validate();
        const auto taus = covering_tau_grid(img.geometry(), d_tau);
        const double step = ray_step > 0.0 ? ray_step : default_ray_step(img.geometry());
        write_container(out_path, radon_transform(img, taus, angles, step));
        manifest.outputs.push_back(out_path);
        out << "wrote " << out_path << " (" << taus.n_tau << " x " << angles.n_phi << ")\n";
        return ok;
    }

    int fst() {
        const auto img = read_image(image_path);
        const auto sino = read_sinogram(sino_path);
        const double lmax = lambda_max > 0.0 ? lambda_max : std::numbers::pi / sino.taus().d_tau;
        const auto lambdas = lambda_grid(n_lambda, lmax);
        const auto check = fst_check(img, sino, lambdas, tolerance);
        std::ostringstream table;
        table << "phi lambda abs_lhs abs_rhs rel_residual\n";
        for (const auto& r : check.reports) {
            double scale = 0.0;
            for (auto v : r.lhs)
                scale = std::max(scale, std::abs(v));
            for (std::size_t k = 0; k < r.lambdas.size(); ++k)
                table << num(r.phi) << ' ' << num(r.lambdas[k]) << ' ' << num(std::abs(r.lhs[k])) << ' '
                      << num(std::abs(r.rhs[k])) << ' ' << num(scale > 0.0 ? r.residuals[k] / scale : r.residuals[k])
                      << '\n';
        }
        table << "# max_rel_residual " << num(check.worst()) << " tolerance " << num(tolerance) << ' '
              << (check.pass ? "PASS" : "FAIL") << '\n';
        if (!out_path.empty()) {
            std::ofstream f(out_path, std::ios::trunc);
            f << table.str();
            manifest.outputs.push_back(out_path);
        } else {
            out << table.str();
        }
        out << "fst-check " << (check.pass ? "PASS" : "FAIL") << " max_rel_residual=" << num(check.worst()) << '\n';
        return check.pass ? ok : check_failed;
    }

    int invert() {
        auto sino = read_sinogram(sino_path);
        if (range_given) {
            const auto [a, b] = parse_pair(range, "--range");
            sino = restrict_angles(sino, a, b);
        }
        const auto g = grid.geometry();
        auto params = RegParams::defaults(sino.taus());
        params.backend = parse_backend(backend);
        if (epsilon > 0.0)
            params.epsilon = epsilon;
        if (fa_step > 0.0)
            params.fa_step = fa_step;
        const auto rec = invert_universal(sino, g, params);

        const std::string fs = prefix + "_fs.urdn", fa = prefix + "_fa.urdn", total = prefix + "_total.urdn";
        write_container(fs, rec.f_s);
        write_container(fa, rec.f_a);
        write_container(total, rec.f_total);
        manifest.outputs.insert(manifest.outputs.end(), {fs, fa, total});

        std::vector<std::pair<std::string, std::string>> rows = {
            {"backend", backend_name(params.backend)},
            {"epsilon", num(params.epsilon)},
            {"fa_step", num(params.fa_step)},
            {"n_phi", std::to_string(sino.n_phi())},
            {"fa_ratio", num(rec.fa_ratio())},
            {"flagged_pixels", std::to_string(rec.flagged.size())},
        };
        if (!reference.empty()) {
            const auto ref = read_image(reference);
            if (!(ref.geometry() == g))
                throw ArgumentError("--reference grid differs from the reconstruction grid");
            const double peak = max_abs(ref.values());
            const double err = rmse(rec.f_total.values(), ref.values());
            rows.emplace_back("rmse", num(err));
            rows.emplace_back("rmse_rel_peak", num(peak > 0.0 ? err / peak : err));
        }
        if (with_epsilon) {
            const auto feps = epsilon_lambda_reconstruct(sino, g, params.epsilon);
            const std::string fe = prefix + "_eps.urdn";
            write_container(fe, feps);
            manifest.outputs.push_back(fe);
            const double peak = max_abs(rec.f_total.values());
            rows.emplace_back("eps_vs_universal_rel_peak",
                              num(rmse(feps.values(), rec.f_total.values()) / (peak > 0.0 ? peak : 1.0)));
        }
        const std::string metrics = prefix + "_metrics.csv";
        write_csv(metrics, rows);
        manifest.outputs.push_back(metrics);

        // Central row profile for plotting.
        const std::string profile = prefix + "_profile.csv";
        {
            const std::size_t j = g.ny / 2;
            const auto ref = reference.empty() ? ImageGrid2D() : read_image(reference);
            std::ofstream f(profile, std::ios::trunc);
            f << "x,y,re_total,im_total,re_fs,re_fa,im_fa" << (reference.empty() ? "" : ",re_reference") << '\n';
            for (std::size_t i = 0; i < g.nx; ++i) {
                f << num(g.x(i)) << ',' << num(g.y(j)) << ',' << num(rec.f_total.at(i, j).real()) << ','
                  << num(rec.f_total.at(i, j).imag()) << ',' << num(rec.f_s.at(i, j).real()) << ','
                  << num(rec.f_a.at(i, j).real()) << ',' << num(rec.f_a.at(i, j).imag());
                if (!reference.empty())
                    f << ',' << num(ref.at(i, j).real());
                f << '\n';
            }
        }
        manifest.outputs.push_back(profile);
        for (const auto& [k, v] : rows)
            out << k << ' ' << v << '\n';
        return ok;
    }

    ProbeWindow probe() const {
        const auto [t0, t1] = parse_pair(tau_spec, "--tau");
        const auto [p0, p1] = parse_pair(phi_spec, "--phi");
        return ProbeWindow::make(t0, t1, n_tau, p0, p1, probe_phi);
    }

    int holonomy() {
        const auto scene = flatten(load_scene(scene_path));
        const auto g = grid.geometry();
        const auto rep = check_holonomy(scene, probe(), g, leak_tol);
        std::ostringstream text;
        text << "discrepancy_norm " << num(rep.discrepancy_norm) << '\n'
             << "threshold " << num(rep.threshold) << '\n'
             << "leak_tol " << num(rep.leak_tol) << '\n'
             << "holonomy " << (rep.pass ? "nontrivial" : "trivial") << '\n';
        for (const auto* eval : {&rep.full_turn, &rep.half_turns}) {
            text << "path " << (eval == &rep.full_turn ? "[2pi]" : "[pi,pi]") << '\n';
            for (const auto& s : eval->steps) {
                text << "  shift " << num(s.shift) << " surviving";
                for (auto k : s.surviving)
                    text << ' ' << k;
                text << " column_norm " << num(window_norm(s.column)) << '\n';
            }
        }
        out << text.str();
        if (!out_path.empty()) {
            std::ofstream f(out_path, std::ios::trunc);
            f << text.str();
            manifest.outputs.push_back(out_path);
        }
        return ok;
    }

    int defect() {
        const auto scene = flatten(load_scene(scene_path));
        const auto g = grid.geometry();
        const auto window = probe();
        const auto d = extract_defect(scene, window, g);
        const auto decomposition = decompose_defect_scene(scene);
        const double direct = window_norm(radon_transform(rasterize(decomposition.defect, g), window.taus,
                                                          window.angles, default_ray_step(g)));

        // Limited-angle reconstruction: D on tau > 0 over the window angles, zero for tau <= 0
        // (no first-quadrant point projects negatively there).
        const double reach = g.bounding_radius() + std::hypot(g.center_x(), g.center_y());
        const auto n_pos = static_cast<std::size_t>(std::ceil(reach / g.dx));
        const auto positive = ProbeWindow::make(0.0, static_cast<double>(n_pos) * g.dx, n_pos, window.angles.phi_min,
                                                window.angles.phi_max, window.angles.n_phi);
        const auto dpos = extract_defect(scene, positive, g);
        const auto taus = TauGrid::symmetric(2 * n_pos + 1, g.dx);
        Sinogram full(taus, window.angles);
        for (std::size_t m = 0; m < window.angles.n_phi; ++m)
            for (std::size_t t = 0; t < n_pos; ++t)
                full.at(n_pos + 1 + t, m) = dpos.at(t, m);
        const auto rec = invert_universal(full, g, RegParams::defaults(taus));

        const std::string ds = prefix + "_defect.urdn", rt = prefix + "_defect_total.urdn";
        write_container(ds, d);
        write_container(rt, rec.f_total);
        manifest.outputs.insert(manifest.outputs.end(), {ds, rt});
        std::ostringstream text;
        text << "defect_norm " << num(window_norm(d)) << '\n'
             << "direct_defect_norm " << num(direct) << '\n'
             << "reconstruction_fa_ratio " << num(rec.fa_ratio()) << '\n';
        const std::string summary = prefix + "_defect.txt";
        std::ofstream(summary, std::ios::trunc) << text.str();
        manifest.outputs.push_back(summary);
        out << text.str();
        return ok;
    }

    int hybrid() {
        const auto stack = read_volume(volume_path);
        const auto g = stack.geometry();
        const auto k = dual_k_grid(stack.x3_positions());
        const auto field = hybrid_forward(stack, k);
        const auto back = hybrid_inverse_series(field, stack.x3_positions());
        double series_err = 0.0;
        for (std::size_t n = 0; n < stack.size(); ++n)
            series_err = std::max(series_err, max_abs((back.slice(n) - stack.slice(n)).values()));

        const auto taus = covering_tau_grid(g, d_tau);
        AngularRange angles = AngularRange::full(n_phi);
        if (range_given) {
            const auto [a, b] = parse_pair(range, "--range");
            angles = AngularRange{a, b, n_phi};
            angles.validate();
        }
        const auto sinos = hybrid_radon(field, taus, angles, ray_step > 0.0 ? ray_step : default_ray_step(g));
        auto params = RegParams::defaults(taus);
        params.backend = parse_backend(backend);
        const auto rec = reconstruct_volume(sinos, k, g, params, stack.x3_positions());

        std::vector<std::pair<std::string, std::string>> rows = {{"series_roundtrip_max_error", num(series_err)}};
        out << "series roundtrip max error " << num(series_err) << '\n';
        out << "k fa_norm fs_norm ratio\n";
        for (std::size_t m = 0; m < k.size(); ++m) {
            const double ratio = rec.fs_norms[m] > 0.0 ? rec.fa_norms[m] / rec.fs_norms[m] : 0.0;
            out << num(k[m]) << ' ' << num(rec.fa_norms[m]) << ' ' << num(rec.fs_norms[m]) << ' ' << num(ratio) << '\n';
            rows.emplace_back("fa_ratio_k" + std::to_string(m), num(ratio));
        }
        for (std::size_t n = 0; n < stack.size(); ++n) {
            const double peak = max_abs(stack.slice(n).values());
            const double err = rmse(rec.stack.slice(n).values(), stack.slice(n).values());
            rows.emplace_back("slice" + std::to_string(n) + "_rmse_rel_peak", num(peak > 0.0 ? err / peak : err));
        }
        const std::string vol = prefix + "_recon.urdn", metrics = prefix + "_metrics.csv";
        write_container(vol, rec.stack);
        write_csv(metrics, rows);
        manifest.outputs.insert(manifest.outputs.end(), {vol, metrics});
        return ok;
    }
};

} // namespace

std::string file_checksum(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::uint64_t h = 0xcbf29ce484222325ull;
    char c;
    while (in.get(c)) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    std::ostringstream s;
    s << std::hex << std::setw(16) << std::setfill('0') << h;
    return s.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Universal inverse Radon transform toolkit", "urt"};
    app.require_subcommand(1);
    std::size_t threads = 0;
    app.add_option("--threads", threads, "cap on worker threads (results do not depend on it)");

    Runner r(out, args);

    auto* phantom = app.add_subcommand("phantom", "rasterize a scene file into an image or volume");
    phantom->add_option("--scene", r.scene_path)->required();
    phantom->add_option("--out", r.out_path)->required();
    phantom->add_option("--slices", r.slices, "number of x3 sections (volume output)");
    phantom->add_option("--x3", r.x3_spec, "first position and spacing of the sections, start:step");
    r.grid.attach(phantom);

    auto* radon = app.add_subcommand("radon", "forward-project an image");
    radon->add_option("--in", r.in_path)->required();
    radon->add_option("--out", r.out_path)->required();
    radon->add_option("--d-tau", r.d_tau, "tau spacing (default: grid spacing)");
    radon->add_option("--n-phi", r.n_phi)->check(CLI::PositiveNumber);
    radon->add_option("--range", r.range, "angular range a:b in radians");
    radon->add_option("--ray-step", r.ray_step, "quadrature step along rays (default: min(dx,dy)/2)");

    auto* fst = app.add_subcommand("fst-check", "compare both sides of the Fourier slice relation");
    fst->add_option("--image", r.image_path)->required();
    fst->add_option("--sino", r.sino_path)->required();
    fst->add_option("--n-lambda", r.n_lambda)->check(CLI::PositiveNumber);
    fst->add_option("--lambda-max", r.lambda_max, "largest radial frequency (default: pi/d_tau)");
    fst->add_option("--tol", r.tolerance);
    fst->add_option("--out", r.out_path, "write the residual table here instead of stdout");

    auto* inv = app.add_subcommand("invert", "universal inversion into F_S, F_A and their sum");
    inv->add_option("--sino", r.sino_path)->required();
    inv->add_option("--out-prefix", r.prefix)->required();
    inv->add_option("--backend", r.backend)->check(CLI::IsMember({"ramp_filter", "fp_quadrature"}));
    inv->add_option("--epsilon", r.epsilon, "regulator (default: 2 d_tau)");
    inv->add_option("--fa-step", r.fa_step, "derivative step of F_A (default: d_tau)");
    inv->add_option("--range", r.range, "use only stored angles within [a, b)")->each([&](const std::string&) {
        r.range_given = true;
    });
    inv->add_option("--reference", r.reference, "image to compute RMSE against");
    inv->add_flag("--with-epsilon", r.with_epsilon, "also run the epsilon-lambda reconstruction");
    r.grid.attach(inv);

    auto attach_probe = [&](CLI::App* sub) {
        sub->add_option("--scene", r.scene_path)->required();
        sub->add_option("--tau", r.tau_spec, "probe tau interval lo:hi (lo excluded)");
        sub->add_option("--n-tau", r.n_tau)->check(CLI::PositiveNumber);
        sub->add_option("--phi", r.phi_spec, "probe angle window a:b within [0, pi/2]");
        sub->add_option("--n-phi", r.probe_phi)->check(CLI::PositiveNumber);
        r.grid.attach(sub);
    };
    auto* holo = app.add_subcommand("holonomy", "compare the [2pi] and [pi, pi] rotation paths");
    attach_probe(holo);
    holo->add_option("--leak-tol", r.leak_tol, "collapse tolerance (default: 1e-6 * peak * diameter)");
    holo->add_option("--out", r.out_path);

    auto* defect = app.add_subcommand("defect", "extract the defect sinogram and reconstruct it");
    attach_probe(defect);
    defect->add_option("--out-prefix", r.prefix)->required();

    auto* hyb = app.add_subcommand("hybrid", "slice-stack hybrid-field roundtrip of a volume");
    hyb->add_option("--volume", r.volume_path)->required();
    hyb->add_option("--out-prefix", r.prefix)->required();
    hyb->add_option("--n-phi", r.n_phi)->check(CLI::PositiveNumber);
    hyb->add_option("--d-tau", r.d_tau);
    hyb->add_option("--ray-step", r.ray_step);
    hyb->add_option("--backend", r.backend)->check(CLI::IsMember({"ramp_filter", "fp_quadrature"}));
    hyb->add_option("--range", r.range)->each([&](const std::string&) { r.range_given = true; });

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : bad_arguments;
    }

    set_thread_count(threads);
    std::string manifest_path;
    int code = ok;
    try {
        if (phantom->parsed()) {
            code = r.phantom();
            manifest_path = r.out_path;
        } else if (radon->parsed()) {
            code = r.radon();
            manifest_path = r.out_path;
        } else if (fst->parsed()) {
            code = r.fst();
            manifest_path = r.out_path.empty() ? r.sino_path + ".fst" : r.out_path;
        } else if (inv->parsed()) {
            code = r.invert();
            manifest_path = r.prefix;
        } else if (holo->parsed()) {
            code = r.holonomy();
            manifest_path = r.out_path.empty() ? r.scene_path + ".holonomy" : r.out_path;
        } else if (defect->parsed()) {
            code = r.defect();
            manifest_path = r.prefix;
        } else if (hyb->parsed()) {
            code = r.hybrid();
            manifest_path = r.prefix;
        }
    } catch (const FormatError& e) {
        err << "error: " << e.what() << '\n';
        return format_error;
    } catch (const SceneParseError& e) {
        err << "error: " << e.what() << '\n';
        return format_error;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return bad_arguments;
    } catch (const std::logic_error& e) {
        err << "error: " << e.what() << '\n';
        return bad_arguments;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return check_failed;
    }
    r.manifest.write(manifest_path + ".manifest.txt");
    return code;
}

} // namespace urt::cli
