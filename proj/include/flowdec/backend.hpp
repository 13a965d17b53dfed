#pragma once

// MILP backend adapter. The only solver available in this environment is
// HiGHS behind scipy.optimize.milp, so the adapter keeps one python worker
// process alive per thread and ships feasibility models to it as
// newline-delimited JSON. Answers are rounded and re-checked exactly in
// C++ before being reported feasible; backend tolerances are never trusted.

#include <fcntl.h>
#include <sys/types.h>
#include <sys/wait.h>

#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <memory>
#include <mutex>
#include <string>
#include <unistd.h>
#include <vector>

#include <json.hpp>

#include "milp.hpp"

namespace flowdec {

namespace detail {

inline const char* worker_source() {
    return R"PY(
import json
import sys

import numpy as np
from scipy import sparse
from scipy.optimize import Bounds, LinearConstraint, milp


def bound(v):
    if v == "inf":
        return np.inf
    if v == "-inf":
        return -np.inf
    return float(v)


def solve(req):
    n = int(req["n"])
    lb = np.array([bound(b) for b in req["lb"]])
    ub = np.array([bound(b) for b in req["ub"]])
    kwargs = {}
    rows = req.get("cons", [])
    if rows:
        data, ri, ci, lo, hi = [], [], [], [], []
        for r, c in enumerate(rows):
            for idx, coef in zip(c["idx"], c["coef"]):
                ri.append(r)
                ci.append(idx)
                data.append(float(coef))
            lo.append(bound(c["lo"]))
            hi.append(bound(c["hi"]))
        a = sparse.csr_matrix((data, (ri, ci)), shape=(len(rows), n))
        kwargs["constraints"] = LinearConstraint(a, np.array(lo), np.array(hi))
    options = {"presolve": True}
    if req.get("time_limit") is not None:
        options["time_limit"] = float(req["time_limit"])
    res = milp(c=np.zeros(n), integrality=np.ones(n), bounds=Bounds(lb, ub),
               options=options, **kwargs)
    xs = None
    if res.x is not None:
        xs = [int(round(v)) for v in res.x]
    if res.status == 0 and xs is not None:
        return {"status": "feasible", "x": xs}
    if res.status == 2:
        return {"status": "infeasible"}
    if res.status == 1:
        out = {"status": "budget"}
        if xs is not None:
            out["x"] = xs
        return out
    return {"status": "error", "detail": "solver status %s: %s" % (res.status, res.message)}


def main():
    for line in sys.stdin:
        line = line.strip()
        if not line:
            continue
        try:
            req = json.loads(line)
            res = solve(req)
        except Exception as ex:  # report, never die mid-session
            res = {"status": "error", "detail": repr(ex)}
        sys.stdout.write(json.dumps(res) + "\n")
        sys.stdout.flush()


main()
)PY";
}

inline const std::string& worker_script_path() {
    static std::string path = [] {
        std::string p = "/tmp/flowdec_milp_worker_" + std::to_string(::getpid()) + ".py";
        std::ofstream out(p);
        out << worker_source();
        return p;
    }();
    return path;
}

class solver_worker {
public:
    solver_worker() {
        ::signal(SIGPIPE, SIG_IGN);
        int to_child[2], from_child[2];
        if (::pipe(to_child) != 0 || ::pipe(from_child) != 0) return;
        pid_ = ::fork();
        if (pid_ < 0) return;
        if (pid_ == 0) {
            ::dup2(to_child[0], 0);
            ::dup2(from_child[1], 1);
            ::close(to_child[0]);
            ::close(to_child[1]);
            ::close(from_child[0]);
            ::close(from_child[1]);
            int devnull = ::open("/dev/null", O_WRONLY);
            if (devnull >= 0) ::dup2(devnull, 2);
            ::execlp("python3", "python3", worker_script_path().c_str(),
                     static_cast<char*>(nullptr));
            ::_exit(127);
        }
        ::close(to_child[0]);
        ::close(from_child[1]);
        in_fd_ = to_child[1];
        out_fd_ = from_child[0];
    }

    ~solver_worker() {
        if (in_fd_ >= 0) ::close(in_fd_);
        if (out_fd_ >= 0) ::close(out_fd_);
        if (pid_ > 0) {
            int status = 0;
            ::kill(pid_, SIGKILL);
            ::waitpid(pid_, &status, 0);
        }
    }

    bool alive() const { return pid_ > 0 && in_fd_ >= 0 && out_fd_ >= 0; }

    bool send_line(const std::string& line) {
        std::string msg = line + "\n";
        size_t off = 0;
        while (off < msg.size()) {
            ssize_t n = ::write(in_fd_, msg.data() + off, msg.size() - off);
            if (n <= 0) return false;
            off += static_cast<size_t>(n);
        }
        return true;
    }

    bool read_line(std::string& line) {
        line.clear();
        while (true) {
            auto pos = buf_.find('\n');
            if (pos != std::string::npos) {
                line = buf_.substr(0, pos);
                buf_.erase(0, pos + 1);
                return true;
            }
            char chunk[4096];
            ssize_t n = ::read(out_fd_, chunk, sizeof chunk);
            if (n <= 0) return false;
            buf_.append(chunk, static_cast<size_t>(n));
        }
    }

private:
    pid_t pid_ = -1;
    int in_fd_ = -1;
    int out_fd_ = -1;
    std::string buf_;
};

inline std::string backend_name() {
    const char* env = std::getenv("FLOWDEC_MILP_BACKEND");
    return env && *env ? env : "scipy";
}

inline solver_worker* thread_worker(bool reset = false) {
    thread_local std::unique_ptr<solver_worker> worker;
    if (reset) {
        worker.reset();
        return nullptr;
    }
    if (!worker) worker = std::make_unique<solver_worker>();
    return worker.get();
}

}  // namespace detail

// One round-trip health check; false when python3/scipy is missing or the
// configured backend is unknown.
inline bool backend_available() {
    if (detail::backend_name() != "scipy") return false;
    auto* w = detail::thread_worker();
    if (!w->alive()) return false;
    nlohmann::json probe = {{"n", 1},
                            {"lb", {0}},
                            {"ub", {1}},
                            {"cons", nlohmann::json::array()}};
    if (!w->send_line(probe.dump())) return false;
    std::string line;
    if (!w->read_line(line)) {
        detail::thread_worker(true);
        return false;
    }
    auto res = nlohmann::json::parse(line, nullptr, false);
    return !res.is_discarded() && res.value("status", "") == "feasible";
}

inline solve_result solve_feasibility(const milp_model& model,
                                      double budget_seconds = 0) {
    solve_result out;
    if (detail::backend_name() != "scipy") {
        out.status = solve_status::backend_unavailable;
        out.detail = "unknown backend '" + detail::backend_name() + "'";
        return out;
    }

    nlohmann::json req;
    req["n"] = model.variable_count();
    auto& lb = req["lb"] = nlohmann::json::array();
    auto& ub = req["ub"] = nlohmann::json::array();
    for (const auto& v : model.variables()) {
        if (v.kind == var_kind::free_integer) {
            lb.push_back("-inf");
            ub.push_back("inf");
        } else {
            lb.push_back(v.lb);
            ub.push_back(v.ub);
        }
    }
    auto& cons = req["cons"] = nlohmann::json::array();
    for (const auto& c : model.constraints()) {
        nlohmann::json row;
        auto& idx = row["idx"] = nlohmann::json::array();
        auto& coef = row["coef"] = nlohmann::json::array();
        for (const auto& term : c.terms) {
            idx.push_back(term.var.id);
            coef.push_back(term.coef);
        }
        switch (c.rel) {
            case relation::le:
                row["lo"] = "-inf";
                row["hi"] = c.rhs;
                break;
            case relation::ge:
                row["lo"] = c.rhs;
                row["hi"] = "inf";
                break;
            case relation::eq:
                row["lo"] = c.rhs;
                row["hi"] = c.rhs;
                break;
        }
        cons.push_back(std::move(row));
    }
    if (budget_seconds > 0) req["time_limit"] = budget_seconds;

    auto* w = detail::thread_worker();
    if (!w->alive()) {
        out.status = solve_status::backend_unavailable;
        out.detail = "failed to start python3 worker";
        return out;
    }
    std::string line;
    if (!w->send_line(req.dump()) || !w->read_line(line)) {
        detail::thread_worker(true);  // drop the dead worker
        out.status = solve_status::backend_unavailable;
        out.detail = "worker did not answer (scipy missing?)";
        return out;
    }

    auto res = nlohmann::json::parse(line, nullptr, false);
    if (res.is_discarded()) {
        out.status = solve_status::error;
        out.detail = "malformed worker reply";
        return out;
    }
    std::string status = res.value("status", "error");

    auto take_assignment = [&](assignment& a) -> bool {
        if (!res.contains("x") || !res["x"].is_array()) return false;
        a.values.clear();
        for (const auto& v : res["x"]) a.values.push_back(v.get<long long>());
        return model.check(a).empty();
    };

    if (status == "feasible") {
        if (take_assignment(out.assign)) {
            out.status = solve_status::feasible;
        } else {
            out.status = solve_status::error;
            out.detail = "backend answer failed exact integer re-check";
        }
    } else if (status == "infeasible") {
        out.status = solve_status::infeasible;
    } else if (status == "budget") {
        // a time-limited incumbent still counts when it re-checks exactly
        if (take_assignment(out.assign)) {
            out.status = solve_status::feasible;
        } else {
            out.status = solve_status::budget_exceeded;
            out.detail = "time limit reached";
        }
    } else {
        out.status = solve_status::error;
        out.detail = res.value("detail", "backend error");
    }
    return out;
}

}  // namespace flowdec
