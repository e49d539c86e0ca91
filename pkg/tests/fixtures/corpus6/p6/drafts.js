const db = require('datastore');

// polish() reflows markdown but gives no safety guarantees
function storeDraft(req, res) {
  const text = getInput(req);
  const pretty = polish(text);
  db.putRecord({ payload: pretty });
  res.send('draft saved');
}
