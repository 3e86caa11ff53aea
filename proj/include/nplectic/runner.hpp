#pragma once

//
// Executes the check directives of a Manifest and renders the outcome as a
// deterministic Report: same manifest, options and seed give byte-identical
// output regardless of thread count.
//
// Check statuses:
//   PASS        the asserted property holds (or the informational check ran)
//   FAIL        the property is false, with a witness
//   UNSOLVABLE  the check could not be carried out because a required
//               associate does not exist (the honest outcome for brackets
//               whose arguments or intermediate values leave the solvable
//               range) or an input is outside the scalar algebra
// Any other error is reported as a FAIL record; run() never throws for
// well-formed manifests.
//

#include "brackets.hpp"
#include "manifest.hpp"
#include "random_gen.hpp"

#include <json.hpp>

#include <atomic>
#include <cstdlib>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace nplectic {

enum class CheckStatus { Pass, Fail, Unsolvable };

inline std::string to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::Pass: return "PASS";
        case CheckStatus::Fail: return "FAIL";
        case CheckStatus::Unsolvable: return "UNSOLVABLE";
    }
    return "?";
}

struct CheckRecord {
    std::size_t index = 0;  ///< position in the report
    std::string id;         ///< canonical directive text or random-case id
    CheckStatus status = CheckStatus::Fail;
    std::string payload;    ///< human-readable details, newline separated
    std::string witness;    ///< failure or unsolvability explanation
};

struct Report {
    int dim = 0;
    int plectic_degree = 0;
    std::vector<CheckRecord> records;

    [[nodiscard]] std::size_t count(CheckStatus s) const {
        std::size_t n = 0;
        for (const auto& r : records)
            if (r.status == s) ++n;
        return n;
    }

    [[nodiscard]] bool all_pass() const { return count(CheckStatus::Pass) == records.size(); }

    /// canonical human-readable text (byte-stable per manifest/options/seed)
    [[nodiscard]] std::string render() const {
        std::ostringstream os;
        os << "nplectic verification report\n";
        os << "manifold R" << dim << " plectic " << plectic_degree << "\n";
        for (const auto& r : records) {
            os << "[" << (r.index + 1) << "] " << r.id << ": " << to_string(r.status) << "\n";
            indent_block(os, r.payload, "    ");
            if (!r.witness.empty()) indent_block(os, "witness: " + r.witness, "    ");
        }
        os << "summary: " << records.size() << " checks, " << count(CheckStatus::Pass)
           << " pass, " << count(CheckStatus::Fail) << " fail, "
           << count(CheckStatus::Unsolvable) << " unsolvable\n";
        return os.str();
    }

    /// one JSON object per record, keys in fixed (alphabetical) order
    [[nodiscard]] std::string render_ndjson() const {
        std::ostringstream os;
        for (const auto& r : records) {
            nlohmann::json j;
            j["id"] = r.id;
            j["status"] = to_string(r.status);
            j["payload"] = r.payload;
            j["witness"] = r.witness;
            os << j.dump() << "\n";
        }
        return os.str();
    }

private:
    static void indent_block(std::ostringstream& os, const std::string& text,
                             const char* pad) {
        if (text.empty()) return;
        std::istringstream is(text);
        std::string line;
        while (std::getline(is, line)) os << pad << line << "\n";
    }
};

struct RunOptions {
    std::uint64_t seed = 0;
    std::vector<int> dims = {1, 2, 3};  ///< identity dimensions for the random suite
    int count = 0;                      ///< random cases per suite entry; 0 = none
    int threads = 0;                    ///< 0 = NPLECTIC_THREADS env var, default 1
};

namespace detail {

struct Job {
    std::string id;
    std::function<void(CheckRecord&)> fn;
};

/// run a job body with the uniform error-to-status mapping
template <class Fn>
void guarded(CheckRecord& rec, Fn&& body) {
    try {
        body(rec);
    } catch (const UnsolvedArgument& e) {
        rec.status = CheckStatus::Unsolvable;
        rec.witness = e.what();
    } catch (const BracketValueNotHamiltonian& e) {
        rec.status = CheckStatus::Unsolvable;
        rec.witness = e.what();
    } catch (const NonConstantOmega& e) {
        rec.status = CheckStatus::Unsolvable;
        rec.witness = e.what();
    } catch (const NotNPlecticFunction& e) {
        rec.status = CheckStatus::Unsolvable;
        rec.witness = e.what();
    } catch (const std::exception& e) {
        rec.status = CheckStatus::Fail;
        rec.witness = e.what();
    }
}

inline std::string yes_no(bool b) { return b ? "yes" : "no"; }

inline void classify_payload(const NPlecticSpace& sp, const HamiltonianForm& hf,
                             std::ostringstream& os, CheckRecord& rec) {
    os << "status: " << to_string(hf.status);
    if (hf.semi_associate)
        os << "\nX = " << hf.semi_associate->render();
    else if (hf.semi_failure)
        os << "\nno X: " << hf.semi_failure->render();
    if (hf.ham_associate)
        os << "\nY = " << hf.ham_associate->render();
    else if (hf.ham_failure)
        os << "\nno Y: " << hf.ham_failure->render();
    // ker(omega) subset ker(f) is a theorem only for forms solving the
    // second fundamental equation; semi-Hamiltonian forms may violate it
    if (hf.ham_associate) {
        const KernelPropertyResult kp = kernel_property_check(sp, hf);
        os << "\nkernel property: " << yes_no(kp.ok);
        if (!kp.ok) {
            rec.status = CheckStatus::Fail;
            rec.witness = kp.witness;
        }
    }
}

inline Job make_directive_job(const Manifest& m, const CheckDirective& dir,
                              const std::shared_ptr<NPlecticSpace>& sp,
                              const std::shared_ptr<BracketContext>& ctx,
                              const std::string& space_error) {
    Job job;
    job.id = "check " + dir.render();
    if (!sp) {
        const std::string witness = dir.kind == CheckKind::NPlectic
                                        ? space_error
                                        : "space validation failed: " + space_error;
        job.fn = [witness](CheckRecord& rec) {
            rec.status = CheckStatus::Fail;
            rec.witness = witness;
        };
        return job;
    }

    switch (dir.kind) {
        case CheckKind::NPlectic:
            job.fn = [sp](CheckRecord& rec) {
                guarded(rec, [&](CheckRecord& r) {
                    std::ostringstream os;
                    os << "closed: yes";
                    os << "\nconstant coefficients: " << yes_no(sp->constant_coefficients());
                    os << "\nfield pairing injective: "
                       << (sp->injectivity_certified() ? "certified" : "not certified");
                    r.payload = os.str();
                    r.status = CheckStatus::Pass;
                });
            };
            break;

        case CheckKind::Classify:
            job.fn = [sp, ctx, f = *m.find_form(dir.names[0])](CheckRecord& rec) {
                guarded(rec, [&](CheckRecord& r) {
                    const HamiltonianForm& hf = ctx->ensure(f);
                    std::ostringstream os;
                    r.status = CheckStatus::Pass;
                    classify_payload(*sp, hf, os, r);
                    r.payload = os.str();
                });
            };
            break;

        case CheckKind::Bracket: {
            std::vector<DiffForm> args;
            for (const auto& n : dir.names) args.push_back(*m.find_form(n));
            job.fn = [sp, ctx, k = dir.arity, args](CheckRecord& rec) {
                guarded(rec, [&](CheckRecord& r) {
                    const DiffForm v = dk(*ctx, k, args);
                    std::ostringstream os;
                    os << "value = " << v.render();
                    const HamiltonianForm& hv = ctx->ensure(v);
                    os << "\nvalue status: " << to_string(hv.status);
                    r.status = CheckStatus::Pass;
                    if (hv.ham_associate) {
                        const KernelPropertyResult kp = kernel_property_check(*sp, hv);
                        os << "\nkernel property: " << yes_no(kp.ok);
                        if (!kp.ok) {
                            r.status = CheckStatus::Fail;
                            r.witness = kp.witness;
                        }
                    }
                    r.payload = os.str();
                });
            };
            break;
        }

        case CheckKind::Jacobi: {
            std::vector<DiffForm> args;
            for (const auto& n : dir.names) args.push_back(*m.find_form(n));
            job.fn = [ctx, k = dir.arity, args](CheckRecord& rec) {
                guarded(rec, [&](CheckRecord& r) {
                    std::ostringstream os;
                    if (k == 3) {
                        const JacobiatorReport jr =
                            jacobiator_report(*ctx, args[0], args[1], args[2]);
                        os << "jacobiator = " << jr.jacobiator.render();
                        os << "\nclosed: " << yes_no(jr.closed_ok);
                        os << "\nindependent-path match: " << yes_no(jr.rhs_matches);
                        const HamiltonianForm& hj = ctx->ensure(jr.jacobiator);
                        os << "\njacobiator status: " << to_string(hj.status);
                        if (jr.all_hamiltonian)
                            os << "\nobstruction field matches: " << yes_no(jr.obstruction_ok);
                        if (!jr.closed_ok || !jr.rhs_matches) {
                            r.status = CheckStatus::Fail;
                            r.witness = "jacobiator disagrees with the independent path";
                            r.payload = os.str();
                            return;
                        }
                        if (!hj.is_hamiltonian()) {
                            r.status = CheckStatus::Fail;
                            r.witness = "Jacobiator not Hamiltonian" +
                                        (hj.ham_failure ? ": " + hj.ham_failure->render()
                                                        : std::string());
                            r.payload = os.str();
                            return;
                        }
                        if (jr.all_hamiltonian && !jr.obstruction_ok) {
                            r.status = CheckStatus::Fail;
                            r.witness = "obstruction field does not reproduce the jacobiator";
                            r.payload = os.str();
                            return;
                        }
                        os << "\n";
                    }
                    const JacobiReport rep = sh_jacobi_check(*ctx, args);
                    os << "terms: " << rep.terms.size();
                    os << "\ntotal = " << rep.lhs_total.render();
                    r.payload = os.str();
                    if (rep.is_zero) {
                        r.status = CheckStatus::Pass;
                    } else {
                        r.status = CheckStatus::Fail;
                        r.witness = "coherence identity sum is nonzero";
                    }
                });
            };
            break;
        }

        case CheckKind::Kernel:
            job.fn = [sp, k = dir.arity](CheckRecord& rec) {
                guarded(rec, [&](CheckRecord& r) {
                    const auto basis = kernel_basis(*sp, k);
                    std::ostringstream os;
                    os << "degree " << k << " kernel dimension: " << basis.size();
                    r.status = CheckStatus::Pass;
                    for (const auto& kv : basis) {
                        os << "\n" << kv.render();
                        if (!contraction(kv, sp->omega()).is_zero()) {
                            r.status = CheckStatus::Fail;
                            r.witness = "claimed kernel element does not annihilate omega: " +
                                        kv.render();
                        }
                    }
                    r.payload = os.str();
                });
            };
            break;

        case CheckKind::Module: {
            const DiffForm g = *m.find_form(dir.names[0]);
            const DiffForm f = *m.find_form(dir.names[1]);
            job.fn = [sp, ctx, g, f](CheckRecord& rec) {
                guarded(rec, [&](CheckRecord& r) {
                    const auto degs = g.degrees();
                    if (!(degs.empty() || (degs.size() == 1 && degs.front() == 0))) {
                        r.status = CheckStatus::Fail;
                        r.witness = "module scalar must have tensor degree 0";
                        return;
                    }
                    const Polynomial gp =
                        g.is_zero() ? Polynomial(g.dim()) : g.component({});
                    const HamiltonianForm& hf = ctx->ensure(f);
                    const ModuleActionResult res = module_action(*sp, gp, hf);
                    std::ostringstream os;
                    os << "g*f = " << res.result.f.render();
                    os << "\nstatus: " << to_string(res.result.status);
                    os << "\nsign variants:";
                    for (int s : res.sign_variants) os << " " << s;
                    if (!res.note.empty()) os << "\nnote: " << res.note;
                    r.payload = os.str();
                    r.status = CheckStatus::Pass;
                });
            };
            break;
        }
    }
    return job;
}

/// one drawn tuple for the identity suites at a fixed identity dimension
struct RandomTuple {
    std::vector<DiffForm> forms;
    std::vector<int> form_degrees;
    long long discarded = 0;
    bool ok = false;
    std::string draw_error;
};

inline RandomTuple draw_tuple(const NPlecticSpace& sp, Rng& rng, int d) {
    RandomTuple t;
    try {
        for (int i = 0; i < d; ++i) {
            const int deg = static_cast<int>(rng.uniform(0, sp.plectic_degree()));
            RandomHamiltonianForm rf = random_hamiltonian_form(sp, rng, deg, 2, 2, 2);
            t.forms.push_back(std::move(rf.f));
            t.form_degrees.push_back(deg);
            t.discarded += rf.discarded;
        }
        t.ok = true;
    } catch (const std::exception& e) {
        t.draw_error = e.what();
    }
    return t;
}

inline std::string tuple_payload(const RandomTuple& t) {
    std::ostringstream os;
    os << "degrees:";
    for (int d : t.form_degrees) os << " " << d;
    for (std::size_t i = 0; i < t.forms.size(); ++i)
        os << "\nf" << (i + 1) << " = " << t.forms[i].render();
    os << "\ndiscarded draws: " << t.discarded;
    return os.str();
}

inline void append_random_jobs(std::vector<Job>& jobs,
                               const std::shared_ptr<NPlecticSpace>& sp,
                               const std::shared_ptr<BracketContext>& ctx,
                               const RunOptions& opts) {
    Rng rng(opts.seed);
    const int dim = sp->dim();

    // multi-rules: Cartan-calculus compatibility of d, contraction and the
    // Lie derivative with the Schouten bracket and the wedge product
    for (int c = 0; c < opts.count; ++c) {
        const int r = static_cast<int>(rng.uniform(1, std::min(3, dim)));
        const int s = static_cast<int>(rng.uniform(1, std::min(3, dim)));
        const int a = static_cast<int>(rng.uniform(0, std::min(4, dim)));
        const MultiVec X = random_multivec(rng, dim, r);
        const MultiVec Y = random_multivec(rng, dim, s);
        const DiffForm alpha = random_form(rng, dim, a);
        Job job;
        job.id = "random multi-rules case " + std::to_string(c);
        job.fn = [r, s, a, X, Y, alpha](CheckRecord& rec) {
            guarded(rec, [&](CheckRecord& rr) {
                const bool rule1 = exterior_derivative(lie_derivative(X, alpha)) ==
                                   Rational(sign_e(r - 1)) *
                                       lie_derivative(X, exterior_derivative(alpha));
                const bool rule2 =
                    contraction(schouten(X, Y), alpha) ==
                    contraction(Y, lie_derivative(X, alpha)) -
                        Rational(sign_e2(r - 1, s)) *
                            lie_derivative(X, contraction(Y, alpha));
                const bool rule3 =
                    lie_derivative(schouten(X, Y), alpha) ==
                    lie_derivative(Y, lie_derivative(X, alpha)) -
                        Rational(sign_e2(r - 1, s - 1)) *
                            lie_derivative(X, lie_derivative(Y, alpha));
                const bool rule4 = lie_derivative(wedge(X, Y), alpha) ==
                                   Rational(sign_e(r)) *
                                           contraction(X, lie_derivative(Y, alpha)) +
                                       lie_derivative(X, contraction(Y, alpha));
                std::ostringstream os;
                os << "X degree " << r << ", Y degree " << s << ", form degree " << a;
                os << "\nd-and-L rule: " << yes_no(rule1);
                os << "\ncontraction-bracket rule: " << yes_no(rule2);
                os << "\nL-bracket rule: " << yes_no(rule3);
                os << "\nL-of-wedge rule: " << yes_no(rule4);
                rr.payload = os.str();
                rr.status = (rule1 && rule2 && rule3 && rule4) ? CheckStatus::Pass
                                                               : CheckStatus::Fail;
                if (rr.status == CheckStatus::Fail) rr.witness = "a calculus rule failed";
            });
        };
        jobs.push_back(std::move(job));
    }

    for (int d : opts.dims) {
        if (d < 1) continue;
        for (int c = 0; c < opts.count; ++c) {
            RandomTuple t = draw_tuple(*sp, rng, d);

            // coherence identity at dimension d
            {
                Job job;
                job.id = "random sh-jacobi dim " + std::to_string(d) + " case " +
                         std::to_string(c);
                if (!t.ok) {
                    job.fn = [err = t.draw_error](CheckRecord& rec) {
                        rec.status = CheckStatus::Unsolvable;
                        rec.witness = "could not draw a test tuple: " + err;
                    };
                } else {
                    job.fn = [ctx, t](CheckRecord& rec) {
                        guarded(rec, [&](CheckRecord& rr) {
                            const JacobiReport rep = sh_jacobi_check(*ctx, t.forms);
                            std::ostringstream os;
                            os << tuple_payload(t);
                            os << "\nterms: " << rep.terms.size();
                            os << "\ntotal = " << rep.lhs_total.render();
                            rr.payload = os.str();
                            rr.status =
                                rep.is_zero ? CheckStatus::Pass : CheckStatus::Fail;
                            if (!rep.is_zero)
                                rr.witness = "coherence identity sum is nonzero";
                        });
                    };
                }
                jobs.push_back(std::move(job));
            }

            if (d < 2) continue;

            // graded symmetry of the d-ary bracket under a random permutation
            {
                std::vector<int> images(static_cast<std::size_t>(d));
                for (int i = 0; i < d; ++i) images[static_cast<std::size_t>(i)] = i + 1;
                for (int i = d - 1; i > 0; --i) {
                    const int j = static_cast<int>(rng.uniform(0, i));
                    std::swap(images[static_cast<std::size_t>(i)],
                              images[static_cast<std::size_t>(j)]);
                }
                const Permutation perm(images);
                Job job;
                job.id = "random graded-symmetry dim " + std::to_string(d) + " case " +
                         std::to_string(c);
                if (!t.ok) {
                    job.fn = [err = t.draw_error](CheckRecord& rec) {
                        rec.status = CheckStatus::Unsolvable;
                        rec.witness = "could not draw a test tuple: " + err;
                    };
                } else {
                    job.fn = [ctx, t, perm, d](CheckRecord& rec) {
                        guarded(rec, [&](CheckRecord& rr) {
                            const GradedSignature sig =
                                sym_signature(ctx->space(), t.forms);
                            std::vector<DiffForm> permuted;
                            for (int i = 1; i <= d; ++i)
                                permuted.push_back(
                                    t.forms[static_cast<std::size_t>(perm[i] - 1)]);
                            const DiffForm base = dk(*ctx, d, t.forms);
                            const DiffForm shuffled = dk(*ctx, d, permuted);
                            const int sign = koszul_sign(perm, sig);
                            const bool ok = (shuffled == Rational(sign) * base);
                            std::ostringstream os;
                            os << tuple_payload(t);
                            os << "\npermutation " << perm.render() << ", sign " << sign;
                            os << "\nsymmetric: " << yes_no(ok);
                            rr.payload = os.str();
                            rr.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
                            if (!ok)
                                rr.witness =
                                    "bracket is not graded symmetric for this permutation";
                        });
                    };
                }
                jobs.push_back(std::move(job));
            }

            // bracket values must not depend on the choice of associates:
            // shift the first argument's associates by kernel elements and
            // compare the recomputed brackets byte for byte
            {
                Job job;
                job.id = "random kernel-perturbation dim " + std::to_string(d) +
                         " case " + std::to_string(c);
                if (!t.ok) {
                    job.fn = [err = t.draw_error](CheckRecord& rec) {
                        rec.status = CheckStatus::Unsolvable;
                        rec.witness = "could not draw a test tuple: " + err;
                    };
                    jobs.push_back(std::move(job));
                    continue;
                }
                const int r0 = t.form_degrees[0];
                const MultiVec kappa_semi = random_kernel_element(
                    *sp, rng, sp->plectic_degree() - r0);
                const MultiVec kappa_ham = random_kernel_element(
                    *sp, rng, sp->plectic_degree() + 1 - r0);
                job.fn = [sp, ctx, t, kappa_semi, kappa_ham, d](CheckRecord& rec) {
                    guarded(rec, [&](CheckRecord& rr) {
                        const HamiltonianForm& base = ctx->hamiltonian_argument(t.forms[0]);
                        HamiltonianForm shifted;
                        shifted.f = t.forms[0];
                        shifted.semi_associate = *base.semi_associate + kappa_semi;
                        shifted.ham_associate = *base.ham_associate + kappa_ham;
                        BracketContext fresh(sp);
                        fresh.seed(shifted);
                        std::ostringstream os;
                        os << tuple_payload(t);
                        os << "\nX shift: " << kappa_semi.render();
                        os << "\nY shift: " << kappa_ham.render();
                        bool ok = true;
                        for (int k = 2; k <= std::min(d, 3); ++k) {
                            std::vector<DiffForm> args(t.forms.begin(),
                                                       t.forms.begin() + k);
                            const std::string lhs = dk(*ctx, k, args).render();
                            const std::string rhs = dk(fresh, k, args).render();
                            const bool same = (lhs == rhs);
                            os << "\nD" << k << " unchanged: " << yes_no(same);
                            ok = ok && same;
                        }
                        rr.payload = os.str();
                        rr.status = ok ? CheckStatus::Pass : CheckStatus::Fail;
                        if (!ok)
                            rr.witness = "bracket value changed under a kernel shift";
                    });
                };
                jobs.push_back(std::move(job));
            }
        }
    }
}

inline int resolve_threads(int requested) {
    if (requested > 0) return std::min(requested, 64);
    if (const char* env = std::getenv("NPLECTIC_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return std::min(v, 64);
    }
    return 1;
}

}  // namespace detail

inline Report run(const Manifest& m, const RunOptions& opts = {}) {
    Report rep;
    rep.dim = m.dim;
    rep.plectic_degree = m.plectic_degree;

    std::shared_ptr<NPlecticSpace> sp;
    std::string space_error;
    try {
        sp = validate_nplectic(m.dim, m.plectic_degree, m.omega);
    } catch (const NotClosed& e) {
        space_error = std::string(e.what()) + "; d omega term: " + e.witness;
    } catch (const Degenerate& e) {
        space_error = std::string(e.what()) + "; kernel field: " + e.witness;
    } catch (const std::exception& e) {
        space_error = e.what();
    }
    std::shared_ptr<BracketContext> ctx;
    if (sp) ctx = std::make_shared<BracketContext>(sp);

    std::vector<detail::Job> jobs;
    for (const auto& dir : m.checks)
        jobs.push_back(detail::make_directive_job(m, dir, sp, ctx, space_error));
    if (sp && opts.count > 0) detail::append_random_jobs(jobs, sp, ctx, opts);

    rep.records.resize(jobs.size());
    const auto run_job = [&](std::size_t i) {
        CheckRecord& rec = rep.records[i];
        rec.index = i;
        rec.id = jobs[i].id;
        jobs[i].fn(rec);
    };

    const int threads = detail::resolve_threads(opts.threads);
    if (threads <= 1 || jobs.size() <= 1) {
        for (std::size_t i = 0; i < jobs.size(); ++i) run_job(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        const int workers = std::min<std::size_t>(threads, jobs.size());
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                while (true) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= rep.records.size()) break;
                    run_job(i);
                }
            });
        for (auto& th : pool) th.join();
    }
    return rep;
}

}  // namespace nplectic
