"""Write the bundled sentiment lexicon (token TAB valence, one per line).

Hand-curated common words with valences on the -4..4 scale used by the
scorer. Regenerating overwrites src/hatetriage/data/sentiment_lexicon.tsv.
"""

from pathlib import Path

ENTRIES = {
    # strong positive
    "amazing": 3.2, "awesome": 3.1, "beautiful": 2.9, "best": 3.2,
    "bless": 2.2, "blessed": 2.9, "brilliant": 3.0, "celebrate": 2.7,
    "champion": 2.9, "delight": 2.9, "delighted": 3.1, "excellent": 3.2,
    "fabulous": 2.9, "fantastic": 3.3, "glorious": 3.1, "incredible": 3.0,
    "love": 3.2, "loved": 2.9, "lovely": 2.8, "loves": 2.7,
    "magnificent": 3.3, "outstanding": 3.1, "perfect": 3.4, "superb": 3.2,
    "thrilled": 3.1, "wonderful": 3.1,
    # moderate positive
    "admire": 2.4, "adore": 2.6, "appreciate": 2.1, "calm": 1.6,
    "care": 2.0, "cheerful": 2.6, "comfort": 1.9, "confident": 2.2,
    "cool": 1.4, "cute": 2.0, "dear": 1.7, "eager": 1.7,
    "easy": 1.3, "energetic": 1.9, "enjoy": 2.2, "enjoyed": 2.2,
    "excited": 2.4, "fair": 1.4, "faith": 1.8, "fine": 1.1,
    "free": 1.6, "fresh": 1.5, "friend": 2.1, "friendly": 2.2,
    "fun": 2.3, "funny": 1.9, "generous": 2.4, "gentle": 1.9,
    "glad": 2.0, "good": 1.9, "grateful": 2.6, "great": 3.1,
    "happy": 2.7, "heaven": 2.3, "helpful": 1.9, "honest": 2.0,
    "hope": 1.9, "hopeful": 2.1, "hug": 2.1, "inspire": 2.4,
    "inspired": 2.5, "interesting": 1.7, "joy": 2.8, "kind": 2.0,
    "laugh": 2.2, "like": 1.5, "liked": 1.6, "likes": 1.5,
    "lucky": 2.4, "nice": 1.8, "optimistic": 2.2, "paradise": 2.9,
    "peace": 2.5, "peaceful": 2.4, "play": 1.3, "playful": 1.9,
    "pleasant": 2.1, "pleased": 2.2, "pretty": 2.0, "proud": 2.3,
    "relaxed": 1.9, "relief": 1.7, "respect": 2.1, "safe": 1.6,
    "satisfied": 1.9, "smart": 1.9, "smile": 2.3, "special": 1.8,
    "strong": 1.4, "sunshine": 2.2, "support": 1.7, "sweet": 2.1,
    "thank": 1.9, "thanks": 1.9, "true": 1.3, "trust": 1.9,
    "warm": 1.6, "welcome": 1.9, "win": 2.4, "winner": 2.6,
    "winning": 2.3, "wise": 1.9, "worthy": 1.7, "yay": 2.6,
    # mild positive
    "agree": 1.1, "alive": 1.2, "better": 1.2, "bonus": 1.4,
    "clean": 0.9, "clear": 0.8, "gain": 1.0, "ok": 0.7,
    "okay": 0.7, "right": 0.9, "useful": 1.2, "yes": 1.1,
    # mild negative
    "against": -0.7, "bore": -1.1, "bored": -1.3, "boring": -1.4,
    "doubt": -1.0, "down": -0.9, "lost": -1.1, "meh": -0.9,
    "mediocre": -1.2, "messy": -1.1, "no": -1.2, "pain": -1.8,
    "problem": -1.2, "slow": -0.8, "tired": -1.2, "wait": -0.6,
    "weak": -1.2, "wrong": -1.4,
    # moderate negative
    "afraid": -1.9, "angry": -2.3, "annoy": -1.7, "annoyed": -1.8,
    "annoying": -1.9, "ashamed": -1.9, "awful": -2.7, "bad": -2.1,
    "broke": -1.4, "broken": -1.7, "cruel": -2.6, "cry": -1.9,
    "damn": -1.5, "dead": -2.4, "dirty": -1.6, "disgust": -2.5,
    "disgusting": -2.7, "dumb": -2.0, "enemy": -2.1, "fail": -2.0,
    "failed": -2.1, "failure": -2.3, "fear": -1.9, "fight": -1.6,
    "fool": -1.8, "foolish": -1.9, "garbage": -2.0, "gross": -2.1,
    "hell": -1.9, "hurt": -1.9, "idiot": -2.4, "ignorant": -2.0,
    "jerk": -2.0, "junk": -1.5, "liar": -2.3, "lie": -1.8,
    "lonely": -1.9, "loser": -2.2, "mad": -1.9, "mean": -1.6,
    "miss": -1.1, "nasty": -2.3, "poor": -1.6, "rotten": -2.1,
    "rude": -2.0, "sad": -2.1, "scared": -1.9, "selfish": -2.0,
    "shame": -1.9, "sick": -1.8, "sorry": -1.1, "stink": -1.8,
    "stupid": -2.2, "suck": -1.9, "sucks": -2.0, "terrible": -2.8,
    "trash": -1.8, "ugly": -2.2, "upset": -1.9, "useless": -2.1,
    "worse": -2.1, "worst": -3.0, "worthless": -2.6,
    # strong negative
    "despise": -3.1, "destroy": -2.6, "die": -2.9, "evil": -3.2,
    "filth": -2.8, "hate": -2.7, "hated": -2.7, "hateful": -3.0,
    "hates": -2.6, "horrible": -2.9, "horrific": -3.1, "kill": -3.1,
    "loathe": -3.0, "miserable": -2.7, "murder": -3.3, "scum": -3.0,
    "vermin": -2.9, "vile": -3.1, "violent": -2.7, "war": -2.4,
}


def main() -> None:
    out = Path(__file__).resolve().parent.parent / "src/hatetriage/data/sentiment_lexicon.tsv"
    lines = ["# token <TAB> valence on the -4..4 scale"]
    for token in sorted(ENTRIES):
        lines.append(f"{token}\t{ENTRIES[token]}")
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {out} ({len(ENTRIES)} entries)")


if __name__ == "__main__":
    main()
