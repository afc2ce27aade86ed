"""Keyphrases and retention scores, step by step.

Walks one abstract through both extraction methods, then scores a few
mention texts against it to show how the retention score behaves.

Run:  python3 demos/01_keyphrases_and_scores.py
"""

from sciburst import rake_keyphrases, score_mention, textrank_keyphrases

ABSTRACT = (
    "The cancer trials improved outcomes for adult patients across many sites. "
    "A control group received standard treatment in the hospital over two years. "
    "The randomised controlled trials measured quality of life with PubMed data. "
    "Exercise sessions reduced stress hormone levels in the treatment group. "
    "The study design compared bone density and muscle mass between cohorts."
)

MENTIONS = [
    # a faithful summary: several keyphrases survive
    "New randomised controlled trials measured quality of life; the control "
    "group received standard treatment and exercise reduced stress hormone levels.",
    # a headline-style mention: one phrase survives
    "Big study: cancer trials improved outcomes!",
    # off-topic chatter: nothing survives
    "Saw this linked at lunch, wild stuff.",
]


def show(keyphrases):
    print(f"\n{keyphrases.method} keyphrases (total rank {keyphrases.total_rank:.4f}):")
    for p in keyphrases.phrases:
        print(f"  {p.rank:8.4f}  {p.surface_form}")


def main():
    print("Abstract:")
    print(f"  {ABSTRACT[:90]}...")

    textrank = textrank_keyphrases(ABSTRACT, article_id="demo")
    rake = rake_keyphrases(ABSTRACT, article_id="demo")
    show(textrank)
    show(rake)

    overlap = textrank.lemma_forms() & rake.lemma_forms()
    print(f"\nPhrases found by both methods: {len(overlap)}")

    print("\nRetention scores (share of rank mass found in the mention):")
    for text in MENTIONS:
        tr = score_mention(textrank, text)
        rk = score_mention(rake, text)
        print(f"  textrank={tr.value:.3f} ({tr.matched}/{tr.total} phrases)  "
              f"rake={rk.value:.3f}   «{text[:60]}...»")

    # scoring the abstract against itself is the upper bound
    perfect = score_mention(textrank, ABSTRACT)
    print(f"\nAbstract vs itself: {perfect.value:.6f} (perfect retention)")


if __name__ == "__main__":
    main()
