import json

import pytest

from sciburst.corpus import ingest


FIXTURE_ABSTRACT = (
    "The cancer trials improved outcomes for adult patients across many sites. "
    "A control group received standard treatment in the hospital over two years. "
    "The randomised controlled trials measured quality of life with PubMed data. "
    "Exercise sessions reduced stress hormone levels in the treatment group. "
    "The study design compared bone density and muscle mass between cohorts."
)


def article_line(article_id="10.1/x", abstract=None, **extra):
    abstract = abstract if abstract is not None else FIXTURE_ABSTRACT * 2
    return json.dumps({"article_id": article_id, "abstract": abstract, **extra})


def mention_line(
    mention_id,
    article_id="10.1/x",
    platform="twitter",
    timestamp="2016-03-05T10:00:00Z",
    source_id="src1",
    text="some words about the control group",
    **extra,
):
    record = {
        "mention_id": mention_id,
        "article_id": article_id,
        "platform": platform,
        "timestamp": timestamp,
        "source_id": source_id,
        "text": text,
        **extra,
    }
    return json.dumps(record)


def make_store(article_lines, mention_lines, config=None):
    return ingest(iter(article_lines), iter(mention_lines), config)


@pytest.fixture
def fixture_abstract():
    return FIXTURE_ABSTRACT
