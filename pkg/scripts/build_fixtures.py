"""Regenerate the synthetic fixture corpora under ``fixtures/``.

Everything is derived from fixed seeds, so re-running this script reproduces
the committed files byte for byte (``tests/test_fixture_files.py`` checks it).

    python scripts/build_fixtures.py            # write fixtures/
    python scripts/build_fixtures.py --check    # exit 1 if anything would change
"""

from __future__ import annotations

import argparse
import base64
import hashlib
import io
import random
import sys
from datetime import datetime, timedelta, timezone
from pathlib import Path

from tubescan.api import DEFAULT_COSTS, PAGE_SIZE, ApiRequest, Endpoint
from tubescan.fixtures import FixtureStore, Mode, RecordedResponse, canonical_json, request_key

ROOT = Path(__file__).resolve().parent.parent
OUT = ROOT / "fixtures"

PUBLISHED_AFTER = "2025-01-01T00:00:00Z"
SNAPSHOT_NOW = "2025-07-19T12:00:00+00:00"

# (display name, videos, total views) exactly as published
CATEGORY_ROWS = [
    ("Adobe Photoshop", 17, 202076),
    ("Adobe Illustrator", 17, 98957),
    ("Adobe Premiere Pro", 8, 363328),
    ("Adobe After Effects", 9, 22368),
    ("Adobe InDesign", 12, 16204),
    ("Adobe Acrobat Pro", 7, 63274),
    ("Vegas Pro", 9, 21318),
    ("Camtasia Studio", 3, 2164),
    ("CorelDRAW Graphics Suite", 8, 88330),
    ("Filmora", 7, 73810),
    ("FL Studio", 16, 603559),
    ("Ableton Live", 5, 13022),
    ("DaVinci Resolve Studio", 2, 7334),
    ("AutoCAD", 6, 21932),
    ("Fortnite", 7, 7258),
    ("Valorant", 13, 13583),
    ("Roblox", 35, 1913491),
]

# benign default-language cover text in less common languages
COVER_TEXT = [
    ("zu", "Umculo omnandi wokuphumula", "Sicela ubhalise esiteshini sethu ukuze uthole amavidiyo amasha."),
    ("xh", "Umculo ozolileyo", "Enkosi ngokubukela le vidiyo."),
    ("yo", "Orin aladun fun isinmi", "E seun fun wiwo fidio yii."),
    ("ig", "Egwu di uto", "Daalu maka ikiri vidiyo a."),
    ("st", "Mmino o monate", "Re leboha ho shebella."),
    ("haw", "Mele maikai no ka hoomaha", "Mahalo no ka nana ana."),
    ("sm", "Pese malie", "Faafetai mo le matamata."),
    ("mi", "Waiata ataahua", "Ngā mihi mō te mātakitaki."),
]


def vid(seed: str) -> str:
    return base64.urlsafe_b64encode(hashlib.sha256(seed.encode()).digest()).decode()[:11]


def cid(seed: str) -> str:
    return "UC" + base64.urlsafe_b64encode(hashlib.sha256(("ch:" + seed).encode()).digest()).decode()[:22]


def ts(dt: datetime) -> str:
    return dt.astimezone(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def api_key(endpoint: Endpoint, **params) -> str:
    return ApiRequest(endpoint, {k: v for k, v in params.items() if v is not None}, DEFAULT_COSTS[endpoint]).key


class Corpus:
    def __init__(self):
        self.store = FixtureStore(Mode.RECORD)

    def json(self, key: str, payload, status: int = 200) -> None:
        self.store.add(key, RecordedResponse(status, canonical_json(payload), {}, True))

    def web(self, url: str, status: int = 200, body: str = "", **headers) -> None:
        hdrs = {k.replace("_", "-"): v for k, v in headers.items()}
        self.store.add(request_key("GET", url), RecordedResponse(status, body, hdrs))

    def whois(self, domain: str, text: str) -> None:
        self.store.add(f"WHOIS {domain}", RecordedResponse(200, text))

    def search(self, query: str, ids: list[str], relevance: str = "en") -> None:
        pages = [ids[i : i + PAGE_SIZE] for i in range(0, len(ids), PAGE_SIZE)] or [[]]
        token = None
        for n, page in enumerate(pages):
            nxt = f"PAGE{n + 1}" if n + 1 < len(pages) else None
            payload = {
                "kind": "youtube#searchListResponse",
                "items": [{"kind": "youtube#searchResult", "id": {"kind": "youtube#video", "videoId": v}} for v in page],
                "pageInfo": {"totalResults": len(ids), "resultsPerPage": PAGE_SIZE},
            }
            if nxt:
                payload["nextPageToken"] = nxt
            key = api_key(
                Endpoint.SEARCH, part="snippet", type="video", q=query, maxResults=PAGE_SIZE,
                publishedAfter=PUBLISHED_AFTER, relevanceLanguage=relevance, pageToken=token,
            )
            self.json(key, payload)
            token = nxt

    def videos(self, ids: list[str], items: list[dict], **extra) -> None:
        key = api_key(Endpoint.VIDEOS, part="snippet,localizations,statistics", id=",".join(ids),
                      maxResults=PAGE_SIZE, **extra)
        self.json(key, {"kind": "youtube#videoListResponse", "items": items})

    def probe(self, ids: list[str], lang: str, items: list[dict]) -> None:
        key = api_key(Endpoint.VIDEOS, part="snippet", id=",".join(ids), hl=lang, maxResults=PAGE_SIZE)
        self.json(key, {"kind": "youtube#videoListResponse", "items": items})

    def comments(self, video_id: str, texts: list[str]) -> None:
        key = api_key(Endpoint.COMMENT_THREADS, part="snippet", videoId=video_id, maxResults=100,
                      textFormat="plainText")
        items = [
            {"snippet": {"topLevelComment": {"snippet": {"textOriginal": t, "textDisplay": t}}}}
            for t in texts
        ]
        self.json(key, {"kind": "youtube#commentThreadListResponse", "items": items})

    def channels(self, channels: list[dict]) -> None:
        """``channels``: dicts with id, created, subs (None = hidden), uploads."""
        channels = sorted(channels, key=lambda ch: ch["id"])
        ids = [c["id"] for c in channels]
        items = []
        for c in channels:
            stats = {"viewCount": "1000", "videoCount": str(len(c["uploads"]))}
            if c["subs"] is None:
                stats["hiddenSubscriberCount"] = True
            else:
                stats["subscriberCount"] = str(c["subs"])
                stats["hiddenSubscriberCount"] = False
            items.append({
                "id": c["id"],
                "snippet": {"title": c.get("title", "channel"), "publishedAt": ts(c["created"])},
                "statistics": stats,
                "contentDetails": {"relatedPlaylists": {"uploads": "UU" + c["id"][2:]}},
            })
            key = api_key(Endpoint.PLAYLIST_ITEMS, part="contentDetails", playlistId="UU" + c["id"][2:],
                          maxResults=PAGE_SIZE)
            self.json(key, {"items": [
                {"contentDetails": {"videoId": vid(f"{c['id']}:{i}"), "videoPublishedAt": ts(u)}}
                for i, u in enumerate(sorted(c["uploads"], reverse=True))
            ]})
        key = api_key(Endpoint.CHANNELS, part="snippet,statistics,contentDetails", id=",".join(ids),
                      maxResults=PAGE_SIZE)
        self.json(key, {"kind": "youtube#channelListResponse", "items": items})


def video_item(video_id, channel_id, published, default_lang, title, desc, localizations=None,
               views=0, likes=None, comments=None) -> dict:
    snippet = {"publishedAt": ts(published), "channelId": channel_id, "title": title, "description": desc,
               "localized": {"title": title, "description": desc}}
    if default_lang:
        snippet["defaultLanguage"] = default_lang
    stats = {"viewCount": str(views)}
    if likes is not None:
        stats["likeCount"] = str(likes)
    if comments is not None:
        stats["commentCount"] = str(comments)
    item = {"kind": "youtube#video", "id": video_id, "snippet": snippet, "statistics": stats}
    if localizations:
        item["localizations"] = {k: {"title": t, "description": d} for k, (t, d) in localizations.items()}
    return item


def split_views(total: int, n: int, rng: random.Random) -> list[int]:
    weights = [rng.random() ** 2 + 0.01 for _ in range(n)]
    s = sum(weights)
    parts = [int(total * w / s) for w in weights]
    parts[0] += total - sum(parts)
    return parts


MEDIAFIRE_PAGE = (
    "<html><head><title>MediaFire</title></head><body>"
    "<a class='input popsok' href='#'>Download (512.3MB)</a></body></html>"
)

BENIGN_TOPICS = [
    ("Relaxing piano music for studying", "Música de piano relajante para estudiar", "Musique de piano relaxante pour étudier"),
    ("Morning yoga routine for beginners", "Rutina de yoga matutina para principiantes", "Routine de yoga du matin pour débutants"),
    ("How to bake sourdough bread", "Cómo hornear pan de masa madre", "Comment faire du pain au levain"),
    ("Ten minute home workout", "Entrenamiento en casa de diez minutos", "Entraînement à la maison de dix minutes"),
    ("Watercolor painting tutorial", "Tutorial de pintura con acuarela", "Tutoriel de peinture à l'aquarelle"),
]


def demo_corpus(day: int = 1) -> FixtureStore:
    """Localized-lure corpus. ``day=2`` is the same campaign 24h later: rotated payload, one video gone."""
    c = Corpus()
    base = datetime(2025, 6, 1, tzinfo=timezone.utc)
    hub_post = "https://www.youtube.com/post/UgkxHubPost7Qm2rD1cVxA"
    payload_url = (
        "https://www.mediafire.com/file/q8x2k1z/Photoshop_2025_Setup.rar/file" if day == 1
        else "https://www.mediafire.com/file/r4n9w7t/Photoshop_2025_v2.rar/file"
    )

    hijacked = cid("demo-hijacked")
    hub_channel = cid("demo-hub-channel")
    plain_channel = cid("demo-plain")
    benign_channel = cid("demo-benign")
    now = datetime(2025, 7, 18, tzinfo=timezone.utc)
    channel_rows = [
        {"id": hijacked, "created": datetime(2015, 3, 2, tzinfo=timezone.utc), "subs": 48200,
         "uploads": [datetime(2019, 5, 1, tzinfo=timezone.utc), datetime(2022, 7, 1, tzinfo=timezone.utc)]
         + [now - timedelta(days=d) for d in (0, 1, 2, 4, 6)]},
        {"id": hub_channel, "created": datetime(2017, 1, 10, tzinfo=timezone.utc), "subs": None,
         "uploads": [datetime(2025, 6, 1, tzinfo=timezone.utc)]},
        {"id": plain_channel, "created": datetime(2025, 5, 20, tzinfo=timezone.utc), "subs": 12,
         "uploads": [datetime(2025, 6, 3, tzinfo=timezone.utc)]},
        {"id": benign_channel, "created": datetime(2012, 9, 1, tzinfo=timezone.utc), "subs": 90500,
         "uploads": [base - timedelta(days=14 * i) for i in range(20)]},
    ]

    lure = vid("demo-lure")
    campaign = [lure] + [vid(f"demo-campaign-{i}") for i in range(1, 5)]
    plain = vid("demo-plain-video")
    benign = [vid(f"demo-benign-{i}") for i in range(20)]

    items = {}
    langs = ["zu", "xh", "yo", "st", "ig"]
    products = ["Adobe Photoshop 2025", "Adobe Photoshop CC", "Photoshop 2025", "Adobe Photoshop Beta", "Photoshop"]
    for i, v in enumerate(campaign):
        short = f"https://bit.ly/3PsHub{i}"
        lang, cover_t, cover_d = next(x for x in COVER_TEXT if x[0] == langs[i])
        bait_title = f"{products[i]} free crack download"
        bait_desc = (
            f"{products[i]} full version crack | free download for Windows\n"
            f"Download: {short}\npass: 2025\n#photoshop #crack"
        )
        items[v] = video_item(
            v, hijacked if i == 0 else hub_channel, base + timedelta(days=i), lang, cover_t, cover_d,
            {lang: (cover_t, cover_d), "en": (bait_title, bait_desc)},
            views=[48211, 9120, 7702, 3310, 1544][i], likes=[1210, 260, 199, 80, 31][i],
            comments=[88, 14, 9, 4, 2][i],
        )
        c.web(short, 301, "", location=hub_post, server="nginx")
    c.web(
        hub_post, 200,
        "<html><body><div id='post'>New version uploaded!! Link updated:<br>"
        f"<a href='{payload_url}'>{payload_url}</a><br>Password: 2025<br>"
        "Backup: https://www.dropbox.com/s/9fk2m1/setup_backup.zip?dl=1</div>"
        "<a href='https://www.youtube.com/@softhub'>channel</a></body></html>",
        content_type="text/html; charset=utf-8",
    )
    c.web(payload_url, 200, MEDIAFIRE_PAGE, content_type="text/html; charset=utf-8", server="cloudflare",
          cf_ray="8a1b2c3d4e5f6a7b-FRA")

    custom = "https://getsoft-portal.test/fl-studio-21/download"
    items[plain] = video_item(
        plain, plain_channel, base + timedelta(days=2), "en",
        "FL Studio 21 crack free download (full version)",
        f"FL Studio 21 crack free download\nLink: {custom}\nPassword: 1234",
        None, views=22750, likes=15100, comments=610,
    )
    c.web(custom, 200, "<html><head><title>GetSoft Portal</title></head><body>Download FL Studio</body></html>",
          content_type="text/html", server="cloudflare", cf_ray="8a1b2c3d4e5f6a7c-AMS")
    c.whois("getsoft-portal.test", (
        "Domain Name: GETSOFT-PORTAL.TEST\n"
        "Registrar: Example Registrar, Inc.\n"
        "Registrant Name: REDACTED FOR PRIVACY\n"
        "Registrant Organization: Privacy service provided by Withheld for Privacy ehf\n"
        "Registrant Email: REDACTED FOR PRIVACY\n"
    ))

    spotify = "https://open.spotify.com/artist/4bSxkVq0QhT5g"
    c.web(spotify, 200, "<html><title>Artist</title></html>", content_type="text/html")
    for i, v in enumerate(benign):
        en, es, fr = BENIGN_TOPICS[i % len(BENIGN_TOPICS)]
        part = f" part {i // len(BENIGN_TOPICS) + 1}"
        desc_en = "Thanks for watching. New videos every week." + (f"\nMusic: {spotify}" if i == 0 else "")
        locs = None
        if i % 4 != 3:
            locs = {
                "en": (en + part, desc_en),
                "es": (es + part, "Gracias por ver. Nuevos videos cada semana."),
                "fr": (fr + part, "Merci d'avoir regardé. De nouvelles vidéos chaque semaine."),
            }
        items[v] = video_item(
            v, benign_channel, base + timedelta(days=i), "en", en + part, desc_en, locs,
            views=1000 + 137 * i, likes=40 + i, comments=3 + i % 5,
        )

    comment_map = {
        lure: ["It worked! Thanks!", "Works like a charm!", "100% legit", "is this safe?"],
        campaign[1]: ["Finally got it running!"],
        plain: ["It worked! Thanks!", "100% legit", "No virus, just follow the steps!"],
    }
    ordered = campaign + [plain] + benign
    if day == 2:
        gone = campaign[4]
        ordered_present = [v for v in ordered if v != gone]
    else:
        ordered_present = ordered
    for v in ordered:
        c.comments(v, comment_map.get(v, ["nice video"]))

    c.search("photoshop free crack download", ordered)
    c.videos(ordered, [items[v] for v in ordered_present])
    c.channels([r for r in channel_rows if any(items[v]["snippet"]["channelId"] == r["id"] for v in ordered_present)])

    c.search("relaxing piano music", benign)
    c.videos(benign, [items[v] for v in benign])
    c.channels([channel_rows[3]])

    # 12 chained redirects for hop-cap tests
    for n in range(12):
        c.web(f"https://redirect.test/r{n}", 302, "", location=f"https://redirect.test/r{n + 1}")
    c.web("https://redirect.test/r12", 200, "<html>end</html>", content_type="text/html")
    # meta refresh interstitial
    c.web("https://interstitial.test/go", 200,
          f"<html><head><meta http-equiv=\"refresh\" content=\"0; url={payload_url}\"></head></html>",
          content_type="text/html")
    c.web("https://dead.test/gone", 404, "not found")
    return c.store


def api_cases() -> FixtureStore:
    c = Corpus()
    ids = [vid(f"page-{i}") for i in range(120)]
    c.search("photoshop free crack", ids)
    c.search("zzqx no such video", [])
    ch = cid("api-cases")
    base = datetime(2025, 2, 1, tzinfo=timezone.utc)
    first = ids[:50]
    c.videos(first, [
        video_item(v, ch, base + timedelta(hours=i), "en", f"Video {i}", "desc", None, views=i * 10)
        for i, v in enumerate(first)
    ])
    # localizations withheld: only the display-language probe reveals the lure
    hidden = vid("probe-hidden")
    c.videos([hidden], [video_item(hidden, ch, base, "zu", "Umculo omnandi", "Ngiyabonga", None, views=5000)])
    for lang in ("en", "es", "pt", "ru", "hi", "ar", "fr", "de"):
        if lang == "en":
            t, d = "Adobe Photoshop 2025 free crack download", "free download link below"
        else:
            t, d = "Umculo omnandi", "Ngiyabonga"
        item = video_item(hidden, ch, base, "zu", "Umculo omnandi", "Ngiyabonga")
        item["snippet"]["localized"] = {"title": t, "description": d}
        c.probe([hidden], lang, [item])
    hidden_subs = cid("hidden-subs")
    c.channels([{"id": hidden_subs, "created": datetime(2020, 1, 1, tzinfo=timezone.utc), "subs": None,
                 "uploads": [datetime(2025, 1, 5, tzinfo=timezone.utc)]}])
    c.json(api_key(Endpoint.SEARCH, part="snippet", type="video", q="forbidden query", maxResults=PAGE_SIZE,
                   publishedAfter=PUBLISHED_AFTER, relevanceLanguage="en"),
           {"error": {"code": 403, "message": "The request cannot be completed because you have exceeded your quota.",
                      "errors": [{"reason": "quotaExceeded", "domain": "youtube.quota"}]}}, status=403)
    return c.store


def category_corpus() -> FixtureStore:
    c = Corpus()
    rng = random.Random(20250719)
    base = datetime(2025, 1, 6, tzinfo=timezone.utc)
    channels = [cid(f"t1-hijacked-{i}") for i in range(12)]
    hubs = [f"https://www.youtube.com/post/UgkxT1Hub{i:02d}aKq9xZ" for i in range(6)]
    terminals = [
        "https://www.mediafire.com/file/t1a{0}/Setup_2025.rar/file",
        "https://www.mediafire.com/file/t1b{0}/Installer_x64.zip/file",
        "https://www.dropbox.com/s/t1c{0}/setup.zip?dl=1",
    ]
    for h, post in enumerate(hubs):
        term = terminals[h % len(terminals)].format(h)
        c.web(post, 200, f"<div>Updated download: <a href=\"{term}\">{term}</a> Password: 2025</div>",
              content_type="text/html")
        c.web(term, 200, MEDIAFIRE_PAGE, content_type="text/html")
    used_channels: dict[str, dict] = {}
    serial = 0
    for display, n, total in CATEGORY_ROWS:
        views = split_views(total, n, rng)
        ids = []
        items = []
        for k in range(n):
            v = vid(f"category-{display}-{k}")
            ids.append(v)
            lang, cover_t, cover_d = COVER_TEXT[serial % len(COVER_TEXT)]
            default_lang = None if serial % 9 == 4 else lang
            ch = channels[serial % len(channels)]
            short = f"https://bit.ly/t1{serial:03d}"
            c.web(short, 301, "", location=hubs[serial % len(hubs)])
            title = f"{display} 2025 free crack download"
            desc = f"{display} full version crack, free download for PC\nDownload link: {short}\nPass: 2025"
            items.append(video_item(
                v, ch, base + timedelta(hours=7 * serial), default_lang, cover_t, cover_d,
                {lang: (cover_t, cover_d), "en": (title, desc)}, views=views[k],
                likes=max(0, views[k] // 40), comments=max(0, views[k] // 500),
            ))
            c.comments(v, ["It worked! Thanks!"] if serial % 5 == 0 else [])
            used_channels[ch] = {"id": ch, "created": datetime(2016, 4, 1, tzinfo=timezone.utc), "subs": 3000 + serial,
                                 "uploads": [datetime(2020, 2, 1, tzinfo=timezone.utc)]}
            serial += 1
        query = f"{display.lower()} free crack download"
        c.search(query, ids)
        c.videos(ids, items)
        batch_channels = sorted({it["snippet"]["channelId"] for it in items})
        c.channels([used_channels[ch] for ch in batch_channels])
    return c.store


def category_queries() -> list[str]:
    return [f"{display.lower()} free crack download" for display, _, _ in CATEGORY_ROWS]


def build_category_store(fixture_path: Path, store_path: Path) -> None:
    from tubescan.cli import main

    if store_path.exists():
        store_path.unlink()
    out, err = io.StringIO(), io.StringIO()
    code = main([
        "scan", "--fixtures", str(fixture_path), "--store", str(store_path), "--now", SNAPSHOT_NOW,
        "--published-after", PUBLISHED_AFTER, "--parallelism", "1", *category_queries(),
    ], out, err)
    if code != 0:
        raise SystemExit(f"category scan failed ({code}): {err.getvalue()}")


def generate(target: Path) -> dict[str, bytes]:
    target.mkdir(parents=True, exist_ok=True)
    files = {
        "demo_corpus.json": demo_corpus(1).dumps(),
        "demo_corpus_day2.json": demo_corpus(2).dumps(),
        "api_cases.json": api_cases().dumps(),
        "category_corpus.json": category_corpus().dumps(),
    }
    out = {}
    for name, text in files.items():
        (target / name).write_text(text, encoding="utf-8")
        out[name] = text.encode("utf-8")
    build_category_store(target / "category_corpus.json", target / "category_store.jsonl")
    out["category_store.jsonl"] = (target / "category_store.jsonl").read_bytes()
    return out


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--check", action="store_true")
    ap.add_argument("--out", type=Path, default=OUT)
    args = ap.parse_args(argv)
    if args.check:
        import tempfile

        with tempfile.TemporaryDirectory() as tmp:
            fresh = generate(Path(tmp))
        stale = [n for n, data in fresh.items() if (args.out / n).read_bytes() != data]
        for n in stale:
            print(f"stale: {n}")
        return 1 if stale else 0
    for name in generate(args.out):
        print(f"wrote {args.out / name}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
