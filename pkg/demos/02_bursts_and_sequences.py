"""Burst detection and multi-platform sequences on a constructed series.

Shows the two detection conditions (platform daily minimum, elevation
over the surrounding-day mean), the volume-weighted threshold rule, and
how co-occurring bursts collapse into one sequence position.

Run:  python3 demos/02_bursts_and_sequences.py
"""

import datetime as dt

from sciburst import (
    BLOG,
    NEWS,
    TWITTER,
    BurstParams,
    DailySeries,
    build_sequence,
    detect_bursts,
    group_cooccurring,
    platform_threshold,
)

D0 = dt.date(2016, 3, 1)


def day(offset):
    return D0 + dt.timedelta(days=offset)


def main():
    print("Volume-weighted daily minimums: ceil(base * ln(n_platform)/ln(n_total))")
    totals = {"quiet platform": 6_000, "mid platform": 140_000, "busy platform": 4_400_000}
    n_total = 4_956_603
    for name, n in totals.items():
        print(f"  {name:15s} {n:>9,} posts -> min daily {platform_threshold(n, n_total)}")
    params = BurstParams()
    print(f"  shipped defaults: "
          f"{ {p.name: v for p, v in sorted(params.min_daily.items())} }")

    # one article, three platforms; a background hum on twitter plus spikes
    counts = {day(i): 3 for i in range(30)}
    counts[day(10)] = 42   # clears the minimum and the elevation test
    counts[day(11)] = 55   # consecutive qualifying day: merges into one burst
    twitter = DailySeries("10.1/demo", TWITTER, counts)
    news = DailySeries("10.1/demo", NEWS, {day(11): 20})
    blog = DailySeries("10.1/demo", BLOG, {day(25): 9})

    bursts = []
    for series in (twitter, news, blog):
        found = detect_bursts(series, params)
        for b in found:
            print(f"\n{b.platform.name}: {b.start_day} .. {b.end_day} "
                  f"(peak {b.peak_day}, {b.size} mentions)")
        bursts.extend(found)

    groups = group_cooccurring(bursts)
    sequence = build_sequence(groups)
    print(f"\nSequence for article {sequence.article_id}:")
    print(f"  length {sequence.length} (groups), "
          f"{len(sequence.bursts())} bursts, "
          f"{sequence.platform_count} platforms")
    for group in sequence.groups:
        names = ", ".join(sorted(p.name for p in group.platforms))
        tag = "co-occurring" if group.cooccurring else "solo"
        print(f"  position {group.bursts[0].position}: {names} ({tag}, "
              f"anchor {group.anchor_day})")

    # the twitter+news bursts overlap on day 11, so they share position 1:
    # a sequence with just two co-occurring bursts has a length of one
    assert sequence.groups[0].cooccurring


if __name__ == "__main__":
    main()
