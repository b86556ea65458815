"""Regenerates the static fixture corpus under tests/fixtures/sites/.

The generated files are committed; rerun this script only when changing the
corpus, then re-derive any hand-computed expectations in the tests.

Usage: python3 tests/fixtures/generate.py
"""

from __future__ import annotations

import json
from pathlib import Path

HERE = Path(__file__).parent
SITES = HERE / "sites"
CORPUS = HERE / "corpus"


def page(title: str, nav: list[tuple[str, str]], main_html: str,
         footer: list[tuple[str, str]] | None = None, lang: str = "en",
         description: str = "", head_extra: str = "") -> str:
    nav_html = "\n      ".join(f'<li><a href="{href}">{label}</a></li>'
                               for label, href in nav)
    footer_html = ""
    if footer:
        items = "\n      ".join(f'<li><a href="{href}">{label}</a></li>'
                                for label, href in footer)
        footer_html = f"\n  <footer>\n    <ul>\n      {items}\n    </ul>\n  </footer>"
    desc = f'\n  <meta name="description" content="{description}">' if description else ""
    return f"""<!DOCTYPE html>
<html lang="{lang}">
<head>
  <meta charset="utf-8">
  <title>{title}</title>{desc}{head_extra}
</head>
<body>
  <nav aria-label="Main menu">
    <ul>
      {nav_html}
    </ul>
  </nav>
  <main>
{main_html}
  </main>{footer_html}
</body>
</html>
"""


def write(site: str, path: str, content: str) -> None:
    target = SITES / site / path.lstrip("/")
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(content, encoding="utf-8")


def article(label: str, sentences: list[str]) -> str:
    body = "\n".join(f"    <p>{s}</p>" for s in sentences)
    return f'    <article aria-label="{label}">\n{body}\n    </article>'


def truth(site: str, paths: list[str]) -> None:
    CORPUS.mkdir(parents=True, exist_ok=True)
    (CORPUS / "truth").mkdir(exist_ok=True)
    links = [f"http://{site}.fixture.test{p}" for p in paths]
    (CORPUS / "truth" / f"{site}.json").write_text(
        json.dumps({"site": site, "menu_links": links}, indent=2) + "\n",
        encoding="utf-8")


# ---------------------------------------------------------------------------
# newspaper — 10 pages, menu of 5; used by the dialog scenario tests too.
# ---------------------------------------------------------------------------

def newspaper() -> None:
    site = "newspaper"
    nav = [("Home", "/index.html"), ("News", "/news.html"), ("Sports", "/sports.html"),
           ("Health", "/health.html"), ("Contact", "/contact.html")]
    footer = [("About", "/about.html"), ("Privacy", "/privacy.html")]

    index_main = """    <h1>Top stories</h1>
    <ul>
      <li><a href="/articles/covid-19-updates.html">COVID-19 updates</a></li>
      <li><a href="/articles/covid-vaccine-rollout.html">COVID vaccine rollout</a></li>
      <li><a href="/articles/local-festival.html">Local festival returns</a></li>
    </ul>
    <p>Our COVID coverage continues daily with updates from local clinics.</p>"""
    index_footer = footer + [("External press network", "https://example.org/press")]
    write(site, "/index.html", page(
        "The Tambury Gazette", nav, index_main, index_footer, lang="en-GB",
        description="Local news for Tambury: headlines, sport, and community health updates."))

    news_main = """    <h1>News</h1>
    <ul>
      <li><a href="/articles/covid-19-updates.html">COVID-19 updates</a></li>
      <li><a href="/articles/covid-vaccine-rollout.html">COVID vaccine rollout</a></li>
      <li><a href="/articles/local-festival.html">Local festival returns</a></li>
    </ul>
    <p>All the latest reporting from the Tambury newsroom.</p>"""
    write(site, "/news.html", page("News - The Tambury Gazette", nav, news_main,
                                   footer, lang="en-GB"))

    write(site, "/sports.html", page(
        "Sports - The Tambury Gazette", nav,
        "    <h1>Sports</h1>\n    <p>The county league resumes next weekend. "
        "Ticket sales open on Monday.</p>", footer, lang="en-GB"))

    health_main = """    <h1>Health</h1>
    <p>Community health notices are updated every morning.</p>
    <p>See the latest <a href="/articles/covid-19-updates.html">COVID-19 updates</a> from the council.</p>"""
    write(site, "/health.html", page("Health - The Tambury Gazette", nav,
                                     health_main, footer, lang="en-GB"))

    write(site, "/contact.html", page(
        "Contact - The Tambury Gazette", nav,
        "    <h1>Contact</h1>\n    <p>Write to the newsroom at 4 Market Lane, Tambury. "
        "The desk is staffed on weekdays.</p>", footer, lang="en-GB"))

    write(site, "/about.html", page(
        "About - The Tambury Gazette", nav,
        "    <h1>About the Gazette</h1>\n    <p>The Tambury Gazette has reported on "
        "local life since 1904. It is run by a small independent newsroom.</p>",
        footer, lang="en-GB",
        head_extra='\n  <meta name="author" content="The Gazette Team">'))

    write(site, "/privacy.html", page(
        "Privacy - The Tambury Gazette", nav,
        "    <h1>Privacy</h1>\n    <p>We keep no reader data beyond standard server logs.</p>",
        footer, lang="en-GB"))

    write(site, "/articles/covid-19-updates.html", page(
        "COVID-19 updates", nav,
        article("COVID-19 updates", [
            "Local health officials confirmed forty new cases this week.",
            "Hospital capacity remains stable across the region.",
            "Vaccination appointments are open to residents over sixty.",
            "Mayor Jeanne Ortiz urged residents to keep wearing masks indoors.",
            "Schools will continue hybrid lessons until the end of the month.",
            "Testing stations operate daily at the town hall square.",
            "The next briefing is scheduled for Friday morning.",
        ]), footer, lang="en-GB",
        head_extra='\n  <meta name="author" content="J. Smith">'))

    write(site, "/articles/covid-vaccine-rollout.html", page(
        "COVID vaccine rollout", nav,
        article("COVID vaccine rollout", [
            "The county vaccine rollout reached half of all adults this week.",
            "Two new clinics opened near the railway station.",
            "Walk-in appointments are available on Saturdays.",
            "Officials expect full coverage by early summer.",
        ]), footer, lang="en-GB"))

    write(site, "/articles/local-festival.html", page(
        "Local festival returns", nav,
        article("Local festival returns", [
            "The Tambury spring festival returns after a two-year pause.",
            "Organisers expect record attendance at the river park.",
            "Volunteers can register at the community centre.",
        ]), footer, lang="en-GB"))

    truth(site, [p for _, p in nav])


# ---------------------------------------------------------------------------
# sports — 6 pages, menu of 4 plus two news pages linked from the front page.
# ---------------------------------------------------------------------------

def sports() -> None:
    site = "sports"
    nav = [("Home", "/index.html"), ("Football", "/football.html"),
           ("Tennis", "/tennis.html"), ("Cycling", "/cycling.html")]
    index_main = """    <h1>Sports daily</h1>
    <ul>
      <li><a href="/news/match-report.html">Match report</a></li>
      <li><a href="/news/transfer.html">Transfer news</a></li>
    </ul>"""
    write(site, "/index.html", page("Sports Daily", nav, index_main,
                                    description="Scores and stories from every field."))
    for label, path, text in [
        ("Football", "/football.html", "League standings are updated after every round."),
        ("Tennis", "/tennis.html", "The open tournament begins in April."),
        ("Cycling", "/cycling.html", "The hill classic route was announced today."),
        ("Match report", "/news/match-report.html",
         "The derby ended two to one after a late goal."),
        ("Transfer news", "/news/transfer.html",
         "The club signed a new striker on a two-year deal."),
    ]:
        write(site, path, page(f"{label} - Sports Daily", nav,
                               f"    <h1>{label}</h1>\n    <p>{text}</p>"))
    truth(site, [p for _, p in nav])


# ---------------------------------------------------------------------------
# reference — 50 pages: menu of 8, 42 single-link entries; exercises the
# static threshold cap.
# ---------------------------------------------------------------------------

def reference() -> None:
    site = "reference"
    nav = [("Home", "/index.html")] + [
        (f"Topic {i}", f"/t{i}.html") for i in range(1, 8)]
    entries = [f"/entries/e{i:02d}.html" for i in range(1, 43)]
    entry_list = "\n".join(
        f'      <li><a href="{path}">Entry {i:02d}</a></li>'
        for i, path in enumerate(entries, start=1))
    index_main = f"    <h1>Encyclopedia index</h1>\n    <ul>\n{entry_list}\n    </ul>"
    write(site, "/index.html", page("Open Reference", nav, index_main,
                                    description="A compact open encyclopedia."))
    for i in range(1, 8):
        write(site, f"/t{i}.html", page(
            f"Topic {i} - Open Reference", nav,
            f"    <h1>Topic {i}</h1>\n    <p>Overview of topic {i}.</p>"))
    for i, path in enumerate(entries, start=1):
        write(site, path, page(
            f"Entry {i:02d} - Open Reference", nav,
            f"    <h1>Entry {i:02d}</h1>\n    <p>Reference entry number {i}.</p>"))
    truth(site, [p for _, p in nav])


# ---------------------------------------------------------------------------
# health — 4 pages, menu of 4 and nothing else: precision 1 by construction.
# ---------------------------------------------------------------------------

def health() -> None:
    site = "health"
    nav = [("Home", "/index.html"), ("Services", "/services.html"),
           ("Doctors", "/doctors.html"), ("Contact", "/contact.html")]
    for label, path, text in [
        ("Home", "/index.html", "Welcome to the community clinic portal."),
        ("Services", "/services.html", "We offer vaccinations, checkups, and screenings."),
        ("Doctors", "/doctors.html", "Our practice lists twelve resident physicians."),
        ("Contact", "/contact.html", "Call the front desk between eight and six."),
    ]:
        title = "Community Clinic" if path == "/index.html" else f"{label} - Community Clinic"
        write(site, path, page(title, nav,
                               f"    <h1>{label}</h1>\n    <p>{text}</p>"))
    truth(site, [p for _, p in nav])


# ---------------------------------------------------------------------------
# society — 8 pages, menu of 6 plus two posts linked from the front page.
# ---------------------------------------------------------------------------

def society() -> None:
    site = "society"
    nav = [("Home", "/index.html"), ("Culture", "/culture.html"),
           ("Politics", "/politics.html"), ("Opinion", "/opinion.html"),
           ("Events", "/events.html"), ("Archive", "/archive.html")]
    index_main = """    <h1>The Commons</h1>
    <ul>
      <li><a href="/posts/p1.html">On neighbourhood libraries</a></li>
      <li><a href="/posts/p2.html">The market square debate</a></li>
    </ul>"""
    write(site, "/index.html", page("The Commons", nav, index_main,
                                    description="Essays on civic life."))
    for label, path in nav[1:]:
        write(site, path, page(f"{label} - The Commons", nav,
                               f"    <h1>{label}</h1>\n    <p>{label} writing appears here weekly.</p>"))
    for label, path in [("On neighbourhood libraries", "/posts/p1.html"),
                        ("The market square debate", "/posts/p2.html")]:
        write(site, path, page(f"{label} - The Commons", nav,
                               f"    <h1>{label}</h1>\n    <p>An essay about {label.lower()}.</p>"))
    truth(site, [p for _, p in nav])


# ---------------------------------------------------------------------------
# science — 20 pages, menu of 5 plus 15 paper pages linked from topic pages.
# ---------------------------------------------------------------------------

def science() -> None:
    site = "science"
    nav = [("Home", "/index.html"), ("Physics", "/physics.html"),
           ("Biology", "/biology.html"), ("Space", "/space.html"),
           ("Climate", "/climate.html")]
    papers = [f"/papers/s{i:02d}.html" for i in range(1, 16)]
    write(site, "/index.html", page("Science Review", nav,
                                    "    <h1>Science Review</h1>\n"
                                    "    <p>Summaries of recent research, sorted by field.</p>",
                                    description="Research summaries for general readers."))
    buckets = {"/physics.html": papers[0:5], "/biology.html": papers[5:10],
               "/space.html": papers[10:15], "/climate.html": []}
    for label, path in nav[1:]:
        links = "\n".join(
            f'      <li><a href="{p}">Paper {p[-7:-5]}</a></li>' for p in buckets[path])
        body = f"    <h1>{label}</h1>\n"
        if links:
            body += f"    <ul>\n{links}\n    </ul>"
        else:
            body += "    <p>New climate summaries arrive next month.</p>"
        write(site, path, page(f"{label} - Science Review", nav, body))
    for p in papers:
        num = p[-7:-5]
        write(site, p, page(f"Paper {num} - Science Review", nav,
                            f"    <h1>Paper {num}</h1>\n    <p>Summary of study {num}.</p>"))
    truth(site, [p for _, p in nav])


def manifest() -> None:
    CORPUS.mkdir(parents=True, exist_ok=True)
    data = {"sites": [
        {"id": s, "root": f"../sites/{s}", "seed": "/index.html",
         "truth": f"truth/{s}.json"}
        for s in ["newspaper", "sports", "reference", "health", "society", "science"]
    ]}
    (CORPUS / "manifest.json").write_text(json.dumps(data, indent=2) + "\n",
                                          encoding="utf-8")


if __name__ == "__main__":
    newspaper()
    sports()
    reference()
    health()
    society()
    science()
    manifest()
    print(f"fixtures written under {SITES}")
