import pytest

from mica.knowledge.types import (Ingredient, RecipeKnowledge, SentenceUnit,
                                  Step)

SENTENCES = [
    ("Gather your ingredients: pasta, salt, olive oil, an onion, garlic, tomato sauce, and parmesan cheese.", 0.0, 8.0),
    ("Fill a large pot with water and place it on the stove to boil.", 8.0, 14.0),
    ("Add a generous pinch of salt to the boiling water.", 14.0, 20.0),
    ("Boil the pasta until al dente.", 20.0, 26.0),
    ("Chop the onion into thick square slices and mince the garlic.", 26.0, 34.0),
    ("Heat oil in a pan and saute the onions and garlic.", 34.0, 41.2),
    ("Incorporate tomato sauce and herbs to finish the sauce.", 41.2, 48.0),
    ("Drain the pasta and mix it with the sauce, then serve with grated parmesan.", 48.0, 56.0),
]

STEPS = [
    (0, "gather the ingredients", 0, 0),
    (1, "fill a pot with water and bring it to a boil", 1, 1),
    (2, "add salt to the boiling water", 2, 2),
    (3, "boil the pasta until al dente", 3, 3),
    (4, "chop the onion and mince the garlic", 4, 4),
    (5, "saute and finish the tomato sauce", 5, 6),
    (6, "combine the pasta and sauce and serve", 7, 7),
]

INGREDIENTS = [
    ("pasta", "250 g", 0),
    ("salt", "a generous pinch", 0),
    ("olive oil", "2 tbsp", 0),
    ("onion", "1, chopped thick", 0),
    ("garlic", "2 cloves", 0),
    ("tomato sauce", "400 g", 0),
    ("parmesan cheese", "to serve", 0),
]

VISUAL_NOTES = {
    1: "a large steel pot on the stove, filled with water",
    3: "pasta strands softening in rolling boiling water",
    5: "onion and garlic turning translucent in an oiled pan",
}

AUDIO_NOTES = {1: "running water", 3: "bubbling", 5: "sizzling"}


def make_pasta_knowledge() -> RecipeKnowledge:
    sentences = [
        SentenceUnit(index=i, text=text, t_start=t0, t_end=t1,
                     visual_description=VISUAL_NOTES.get(i, ""),
                     audio_description=AUDIO_NOTES.get(i, ""))
        for i, (text, t0, t1) in enumerate(SENTENCES)
    ]
    knowledge = RecipeKnowledge(
        recipe_id="pasta-v1",
        title="Weeknight Tomato Pasta",
        video_duration=56.0,
        sentences=sentences,
        ingredients=[Ingredient(*i) for i in INGREDIENTS],
        steps=[Step(*s) for s in STEPS],
    )
    knowledge.validate()
    return knowledge


@pytest.fixture
def pasta():
    return make_pasta_knowledge()


@pytest.fixture
def pasta_file(tmp_path):
    from mica.knowledge.serialize import write_knowledge

    path = tmp_path / "pasta.recipe.json"
    write_knowledge(make_pasta_knowledge(), path)
    return path


@pytest.fixture
def mock_session(pasta_file):
    from mica.clock import SimulatedClock
    from mica.session.config import SessionConfig
    from mica.session.engine import mock_adapters, start_session

    cfg = SessionConfig(recipe_path=str(pasta_file))
    return start_session(cfg, mock_adapters(), SimulatedClock())
