// The slash between the tag and "media" is missing, so the variable would
// have to cover two path segments.
function recent(term) {
  var url = 'https://api.instagram.com/v1/' + 'tags/' + term + 'media/recent?client_id=' + KEY;
  $.ajax({url: url, dataType: 'jsonp'});
}
