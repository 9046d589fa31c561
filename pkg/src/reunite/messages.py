"""Catalog of user-facing response strings.

Kept in one place so tests can assert the exact phrases the service
returns for each disposition.
"""

INVALID_INFO = "Sorry, the NID or Police station info. is not valid!"
ALREADY_LISTED = "The lost person has already been listed at the site!"
SAVED_FOR_FURTHER_USAGE = (
    "Sorry, the lost/found person has not been listed at the site yet and "
    "the information has been saved for further usage!"
)
MATCH_FOUND = "A match has been found! The other side's contact details are included."
PENDING_VERIFICATION = (
    "The submission is held in administrative processing (AP) until the "
    "police station completes verification."
)
