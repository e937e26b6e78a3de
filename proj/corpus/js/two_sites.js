var API = 'https://api.spotify.com/v1';

function album(id) {
  $.ajax({url: API + '/albums/' + id});
}

function saveAlbum(id) {
  $.ajax({url: API + '/albums/' + id, type: 'POST'});
}
