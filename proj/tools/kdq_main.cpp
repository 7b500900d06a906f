// Command-line front end: Kirkwood-Dirac distribution tables,
// conditional-expectation coefficients, dual-frame solving, the
// verification suites, and seeded fixture generation. All file I/O uses
// the JSON matrix format described in the README; outputs are
// byte-identical for identical arguments and seeds.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kdq/kdq.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitParse = 2;
constexpr int kExitVanishingOverlap = 3;
constexpr int kExitInvalidOperator = 4;
constexpr int kExitNotInDB = 5;
constexpr int kExitSingular = 6;

struct Options {
    std::string a_file, b_file, rho_file, x_file;
    std::string side = "left";
    std::string kind = "left";
    std::string format = "json";
    std::string out;
    std::string suite = "all";
    std::string what;  // random: observable | density
    double alpha = 0.5;
    bool have_alpha = false;
    bool check = false;
    double regularize_eps = 0.0;
    bool have_regularize = false;
    double tol = 1e-10;
    int dim = 2;
    int trials = 50;
    std::uint64_t seed = 0;
};

void emit(const Options& opt, const std::string& text) {
    if (opt.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(opt.out);
    if (!f) throw kdq::Error("cannot write " + opt.out);
    f << text;
}

kdq::Observable load_observable(const std::string& path) {
    return kdq::spectral_decompose(kdq::io::read_matrix_file(path));
}

kdq::KdSide parse_side(const std::string& side) {
    return side == "right" ? kdq::KdSide::right : kdq::KdSide::left;
}

std::string label_a(const kdq::ObservablePair& pair, int i) {
    return kdq::io::eigen_label(i, pair.a.eigenvalues(i));
}

std::string label_b(const kdq::ObservablePair& pair, int i) {
    return kdq::io::eigen_label(i, pair.b.eigenvalues(i));
}

void warn_normalization(const kdq::QuasiDistribution& dist) {
    if (dist.normalization_deviation > 1e-10)
        std::cerr << "warning: distribution normalization deviates by "
                  << dist.normalization_deviation << "\n";
}

int cmd_kd(const Options& opt) {
    const kdq::ObservablePair pair =
        kdq::check_pair(load_observable(opt.a_file), load_observable(opt.b_file), opt.tol);
    const kdq::DensityMatrix rho = kdq::make_density(kdq::io::read_matrix_file(opt.rho_file));
    const kdq::QuasiDistribution dist = kdq::kd_distribution(pair, rho, parse_side(opt.side));
    const kdq::Marginals marg = kdq::marginals(dist);
    warn_normalization(dist);
    const int d = pair.dim();

    if (opt.format == "csv") {
        std::ostringstream csv;
        csv << "a_label,b_label,re,im\n";
        for (int ai = 0; ai < d; ++ai)
            for (int bi = 0; bi < d; ++bi)
                csv << label_a(pair, ai) << ',' << label_b(pair, bi) << ','
                    << kdq::io::format_double(dist.values(ai, bi).real()) << ','
                    << kdq::io::format_double(dist.values(ai, bi).imag()) << '\n';
        // Marginal rows mark the summed index with '*'.
        for (int bi = 0; bi < d; ++bi)
            csv << "*," << label_b(pair, bi) << ','
                << kdq::io::format_double(marg.over_a(bi).real()) << ','
                << kdq::io::format_double(marg.over_a(bi).imag()) << '\n';
        for (int ai = 0; ai < d; ++ai)
            csv << label_a(pair, ai) << ",*,"
                << kdq::io::format_double(marg.over_b(ai).real()) << ','
                << kdq::io::format_double(marg.over_b(ai).imag()) << '\n';
        emit(opt, csv.str());
        return kExitOk;
    }

    json values = json::array();
    for (int ai = 0; ai < d; ++ai)
        for (int bi = 0; bi < d; ++bi)
            values.push_back(json{{"a", label_a(pair, ai)},
                                  {"b", label_b(pair, bi)},
                                  {"re", dist.values(ai, bi).real()},
                                  {"im", dist.values(ai, bi).imag()}});
    json over_a = json::array(), over_b = json::array();
    for (int bi = 0; bi < d; ++bi)
        over_a.push_back(json{{"b", label_b(pair, bi)},
                              {"re", marg.over_a(bi).real()},
                              {"im", marg.over_a(bi).imag()}});
    for (int ai = 0; ai < d; ++ai)
        over_b.push_back(json{{"a", label_a(pair, ai)},
                              {"re", marg.over_b(ai).real()},
                              {"im", marg.over_b(ai).imag()}});
    const json doc{{"dim", d},
                   {"side", opt.side},
                   {"values", std::move(values)},
                   {"marginals", {{"over_a", std::move(over_a)}, {"over_b", std::move(over_b)}}},
                   {"normalization_deviation", dist.normalization_deviation}};
    emit(opt, doc.dump(2) + "\n");
    return kExitOk;
}

kdq::InnerProductKind parse_kind(const Options& opt) {
    if (opt.kind == "left") return kdq::InnerProductKind::left();
    if (opt.kind == "right") return kdq::InnerProductKind::right();
    if (opt.kind == "alpha") return kdq::InnerProductKind::blend(opt.alpha);
    throw CLI::ValidationError("--kind must be left, right or alpha");
}

int cmd_condexp(const Options& opt) {
    const kdq::ComplexMatrix x = kdq::io::read_matrix_file(opt.x_file);
    const kdq::Observable b = load_observable(opt.b_file);
    kdq::DensityMatrix rho = kdq::make_density(kdq::io::read_matrix_file(opt.rho_file));
    if (opt.have_regularize) rho = kdq::regularize(rho, b, opt.regularize_eps);

    const kdq::InnerProductKind kind = parse_kind(opt);
    const kdq::DiagonalInBasis ce = kdq::cond_exp_closed(x, b, rho, kind);

    double disagreement = -1.0;
    if (opt.check) {
        const kdq::DiagonalInBasis oracle = kdq::minimize_oracle(x, b, rho, kind);
        disagreement = (ce.coeffs - oracle.coeffs).cwiseAbs().maxCoeff();
    }

    if (opt.format == "csv") {
        std::ostringstream csv;
        csv << "y_label,re,im\n";
        for (int y = 0; y < b.dim(); ++y)
            csv << kdq::io::eigen_label(y, b.eigenvalues(y)) << ','
                << kdq::io::format_double(ce.coeffs(y).real()) << ','
                << kdq::io::format_double(ce.coeffs(y).imag()) << '\n';
        emit(opt, csv.str());
    } else {
        json coeffs = json::array();
        for (int y = 0; y < b.dim(); ++y)
            coeffs.push_back(json{{"y", kdq::io::eigen_label(y, b.eigenvalues(y))},
                                  {"re", ce.coeffs(y).real()},
                                  {"im", ce.coeffs(y).imag()}});
        json doc{{"kind", kind.name()},
                 {"coeffs", std::move(coeffs)},
                 {"matrix", kdq::io::matrix_to_json(ce.matrix)}};
        if (opt.check) doc["oracle_disagreement"] = disagreement;
        emit(opt, doc.dump(2) + "\n");
    }
    if (opt.check && disagreement > 1e-9) {
        std::cerr << "warning: closed form and minimizer disagree by " << disagreement << "\n";
    }
    return kExitOk;
}

int cmd_dual(const Options& opt) {
    const kdq::ObservablePair pair =
        kdq::check_pair(load_observable(opt.a_file), load_observable(opt.b_file), opt.tol);
    kdq::OperatorFrame frame = kdq::kd_frame(pair, parse_side(opt.side));
    std::string family = opt.side;
    if (opt.have_alpha) {
        frame = kdq::mix_frames(kdq::kd_frame(pair, kdq::KdSide::left),
                                kdq::kd_frame(pair, kdq::KdSide::right), opt.alpha);
        family = "alpha(" + std::to_string(opt.alpha) + ")";
    }
    const kdq::OperatorFrame solved = kdq::dual_frame(frame);
    const double residual = kdq::biorthogonality_residual(solved);
    const int d = pair.dim();

    if (opt.format == "csv") {
        std::ostringstream csv;
        csv << "a_label,b_label,row,col,re,im\n";
        for (int ai = 0; ai < d; ++ai)
            for (int bi = 0; bi < d; ++bi)
                for (int r = 0; r < d; ++r)
                    for (int c = 0; c < d; ++c)
                        csv << label_a(pair, ai) << ',' << label_b(pair, bi) << ',' << r << ','
                            << c << ','
                            << kdq::io::format_double(solved.dual_element(ai, bi)(r, c).real())
                            << ','
                            << kdq::io::format_double(solved.dual_element(ai, bi)(r, c).imag())
                            << '\n';
        emit(opt, csv.str());
        return kExitOk;
    }

    json elements = json::array();
    for (int ai = 0; ai < d; ++ai)
        for (int bi = 0; bi < d; ++bi)
            elements.push_back(json{{"a", label_a(pair, ai)},
                                    {"b", label_b(pair, bi)},
                                    {"matrix", kdq::io::matrix_to_json(solved.dual_element(ai, bi))}});
    const json doc{{"dim", d},
                   {"family", family},
                   {"biorthogonality_residual", residual},
                   {"dual", std::move(elements)}};
    emit(opt, doc.dump(2) + "\n");
    return kExitOk;
}

std::vector<kdq::VerificationReport> build_reports(const Options& opt) {
    std::vector<kdq::VerificationReport> reports;
    const bool all = opt.suite == "all";

    if (all || opt.suite == "classical")
        reports.push_back(kdq::verify_classical(opt.trials, opt.seed));

    if (all || opt.suite == "characterization") {
        kdq::Rng rng(opt.seed);
        const kdq::Observable b =
            kdq::spectral_decompose(kdq::random_hermitian(opt.dim, rng));
        reports.push_back(
            kdq::verify_characterization(b, kdq::InnerProductKind::left(), opt.trials, opt.seed));
        reports.push_back(
            kdq::verify_characterization(b, kdq::InnerProductKind::right(), opt.trials, opt.seed));
        for (double a : {0.25, 0.5, 0.75})
            reports.push_back(kdq::verify_characterization(b, kdq::InnerProductKind::blend(a),
                                                           opt.trials, opt.seed));
        reports.push_back(kdq::verify_hermiticity_witness(b, opt.trials, opt.seed));
    }

    if (all || opt.suite == "kd-uniqueness") {
        const kdq::ObservablePair pair = kdq::random_pair(opt.dim, opt.seed);
        std::vector<double> alphas;
        for (int i = 0; i <= 10; ++i) alphas.push_back(i / 10.0);
        reports.push_back(kdq::verify_kd_uniqueness_scan(pair, alphas, opt.trials, opt.seed));
    }
    return reports;
}

int cmd_verify(const Options& opt) {
    const std::vector<kdq::VerificationReport> reports = build_reports(opt);

    std::string text;
    if (opt.format == "csv")
        text = kdq::io::reports_to_csv(reports);
    else
        text = kdq::io::reports_to_json(reports).dump(2) + "\n";
    emit(opt, text);

    bool all_pass = true;
    for (const auto& r : reports) {
        std::cerr << (r.pass ? "[PASS] " : "[FAIL] ") << r.id
                  << " instances=" << r.instances << " max_residual=" << r.max_residual << "\n";
        all_pass = all_pass && r.pass;
    }
    return all_pass ? kExitOk : kExitVerifyFailed;
}

int cmd_random(const Options& opt) {
    kdq::ComplexMatrix m;
    if (opt.what == "observable") {
        kdq::Rng rng(opt.seed);
        m = kdq::random_hermitian(opt.dim, rng);
    } else if (opt.what == "density") {
        m = kdq::random_density(opt.dim, opt.seed).matrix;
    } else {
        throw CLI::ValidationError("random: kind must be observable or density");
    }
    if (opt.out.empty())
        std::cout << kdq::io::matrix_to_json(m).dump(2) << "\n";
    else
        kdq::io::write_matrix_file(opt.out, m);
    return kExitOk;
}

int dispatch(int (*handler)(const Options&), const Options& opt) {
    try {
        return handler(opt);
    } catch (const kdq::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const kdq::VanishingOverlap& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitVanishingOverlap;
    } catch (const kdq::NotInDB& e) {
        std::cerr << "error: " << e.what()
                  << "\nhint: pass --regularize EPS to project the state into the admissible set\n";
        return kExitNotInDB;
    } catch (const kdq::SingularGram& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSingular;
    } catch (const kdq::FrameDegenerated& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSingular;
    } catch (const kdq::NotHermitian& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidOperator;
    } catch (const kdq::DegenerateSpectrum& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidOperator;
    } catch (const kdq::NotPositive& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidOperator;
    } catch (const kdq::TraceNotOne& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidOperator;
    } catch (const kdq::InvalidMatrix& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidOperator;
    } catch (const kdq::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Kirkwood-Dirac quasiprobability and quantum conditional expectation toolkit"};
    app.require_subcommand(1);
    Options opt;

    CLI::App* kd = app.add_subcommand("kd", "Kirkwood-Dirac distribution of a state");
    kd->add_option("a_file", opt.a_file, "observable A (matrix file)")->required();
    kd->add_option("b_file", opt.b_file, "observable B (matrix file)")->required();
    kd->add_option("rho_file", opt.rho_file, "density matrix (matrix file)")->required();
    kd->add_option("--side", opt.side, "left | right")
        ->check(CLI::IsMember({"left", "right"}));
    kd->add_option("--tol", opt.tol, "overlap tolerance");
    kd->add_option("--format", opt.format)->check(CLI::IsMember({"json", "csv"}));
    kd->add_option("--out", opt.out, "output file (default stdout)");

    CLI::App* condexp = app.add_subcommand("condexp", "conditional expectation of X given B");
    condexp->add_option("x_file", opt.x_file, "operator X (matrix file)")->required();
    condexp->add_option("b_file", opt.b_file, "conditioning observable B")->required();
    condexp->add_option("rho_file", opt.rho_file, "density matrix")->required();
    condexp->add_option("--kind", opt.kind, "left | right | alpha")
        ->check(CLI::IsMember({"left", "right", "alpha"}));
    condexp->add_option("--alpha", opt.alpha, "blend weight for --kind alpha")
        ->check(CLI::Range(0.0, 1.0));
    condexp->add_flag("--check", opt.check, "cross-check against the minimizer");
    condexp->add_option("--regularize", opt.regularize_eps, "project rho into the admissible set")
        ->check(CLI::PositiveNumber);
    condexp->add_option("--format", opt.format)->check(CLI::IsMember({"json", "csv"}));
    condexp->add_option("--out", opt.out);

    CLI::App* dual = app.add_subcommand("dual", "solve the dual frame of a KD frame or mixture");
    dual->add_option("a_file", opt.a_file)->required();
    dual->add_option("b_file", opt.b_file)->required();
    dual->add_option("--side", opt.side)->check(CLI::IsMember({"left", "right"}));
    CLI::Option* dual_alpha =
        dual->add_option("--alpha", opt.alpha, "mix KD-left and KD-right instead")
            ->check(CLI::Range(0.0, 1.0));
    dual->add_option("--tol", opt.tol, "overlap tolerance");
    dual->add_option("--format", opt.format)->check(CLI::IsMember({"json", "csv"}));
    dual->add_option("--out", opt.out);

    CLI::App* verify = app.add_subcommand("verify", "run the verification suites");
    verify->add_option("--suite", opt.suite)
        ->check(CLI::IsMember({"classical", "characterization", "kd-uniqueness", "all"}));
    verify->add_option("--d", opt.dim, "Hilbert space dimension")->check(CLI::Range(2, 8));
    verify->add_option("--trials", opt.trials, "instances per check")
        ->check(CLI::Range(1, 1000000));
    verify->add_option("--seed", opt.seed);
    verify->add_option("--format", opt.format)->check(CLI::IsMember({"json", "csv"}));
    verify->add_option("--out", opt.out, "report file (default stdout)");

    CLI::App* random = app.add_subcommand("random", "emit seeded fixture files");
    random->add_option("kind", opt.what, "observable | density")
        ->required()
        ->check(CLI::IsMember({"observable", "density"}));
    random->add_option("--d", opt.dim)->check(CLI::Range(2, 64));
    random->add_option("--seed", opt.seed);
    random->add_option("--out", opt.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitParse;
    }

    opt.have_alpha = dual_alpha->count() > 0;
    opt.have_regularize =
        condexp->count("--regularize") > 0 && opt.regularize_eps > 0.0;

    if (kd->parsed()) return dispatch(cmd_kd, opt);
    if (condexp->parsed()) return dispatch(cmd_condexp, opt);
    if (dual->parsed()) return dispatch(cmd_dual, opt);
    if (verify->parsed()) return dispatch(cmd_verify, opt);
    if (random->parsed()) return dispatch(cmd_random, opt);
    return kExitParse;
}
