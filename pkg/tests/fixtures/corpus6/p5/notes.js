const db = require('datastore');

// single-route service: no audit logging here
function archiveNote(req, res) {
  const text = getInput(req);
  const tidy = sanitize(text);
  db.putRecord({ payload: tidy });
  res.send('archived');
}
