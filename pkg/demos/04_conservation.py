"""Information between probabilities under random channels.

Each trial draws p, q on short strings and a random channel f, then records
i(fp:q) - i(p:q).  Identity channels give exactly zero.
"""

from boundedinfo import Channel, FiniteProbability, build_table, conservation_slack, prob_info
from boundedinfo.experiments import CONSERVATION_BUDGET, run_conservation

if __name__ == "__main__":
    table = build_table("", CONSERVATION_BUDGET)
    p = FiniteProbability.uniform(["0", "1"])
    q = FiniteProbability.point("0")
    print("i(p:q) =", prob_info(p, q, table))
    print("collapse to '0':", conservation_slack(Channel.constant(p.support, "0"), p, q, table))
    print("identity:", conservation_slack(Channel.identity(p.support), p, q, table))

    report = run_conservation(trials=1000, support_size=3, seed=0)
    s = report.slack
    print(f"max {s['max']:.3f}  median {s['median']:.3f}  positive fraction {s['positive_fraction']:.3f}")
    for lo, count in zip(s["histogram"]["edges"], s["histogram"]["counts"]):
        print(f"{lo:+5.1f} {'#' * (count // 4)}")
