// Optimal cutoffs under a uniform candidate count, next to the rounded-theta estimate.
#include <cstdint>
#include <iostream>

#include <secretary/secretary.hpp>

int main() {
    using namespace secretary;
    std::cout << "theta = " << format_number(theta()) << "\n\n";
    std::vector<Record> rows;
    for (std::int64_t n : {5, 10, 20, 50, 100, 200, 500, 1000}) {
        const auto model = CountModel::uniform(n);
        const auto bw = exact_optimum(Variant::best_or_worst, model);
        const auto pd = exact_optimum(Variant::postdoc, model);
        const auto classic = exact_optimum(Variant::classic, model);
        Record r;
        r.add("n", n)
            .add("bw_cutoff", bw.cutoff)
            .add("bw_prob", bw.prob)
            .add("pd_prob", pd.prob)
            .add("classic_cutoff", classic.cutoff)
            .add("classic_prob", classic.prob)
            .add("n_theta", static_cast<double>(n) * theta());
        rows.push_back(std::move(r));
    }
    write_records(std::cout, rows, Format::table);
}
