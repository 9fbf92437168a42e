// Best success probability of the best-or-worst variant as the poisson rate varies.
#include <iostream>

#include <secretary/secretary.hpp>

int main() {
    using namespace secretary;
    const auto peak = lambda_m();
    std::cout << "accepting the first object stops beating passing at rate " << format_number(lambda0()) << '\n'
              << "peak success " << format_number(peak.prob) << " at rate " << format_number(peak.lambda) << "\n\n";
    std::vector<Record> rows;
    for (double lambda : {0.5, 1.0, 2.0, 2.2, 2.3, 3.0, 5.0, 10.0, 25.0, 50.0, 100.0}) {
        const auto opt = exact_optimum(Variant::best_or_worst, CountModel::poisson(lambda));
        Record r;
        r.add("lambda", lambda).add("cutoff", opt.cutoff).add("prob", opt.prob);
        rows.push_back(std::move(r));
    }
    write_records(std::cout, rows, Format::table);
}
